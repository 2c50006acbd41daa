//! Monte Carlo BER/FER sweeps: BPSK over AWGN, sum-product decoding, and a
//! frame-error stopping rule.
//!
//! Frames at each point are run in rounds. In every round each worker
//! decodes a fixed share of frames from its own stream, seeded from
//! `(seed, point, worker)`; the point stops after the first round that
//! reaches `min_frame_errors` or `max_frames`. Results therefore depend on
//! the worker count and batch size but not on thread timing.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::code::{BlockCode, Uncoded};
use crate::component::ComponentSpec;
use crate::decoder::{SpaDecoder, Workspace, DEFAULT_MAX_ITER};
use crate::error::{Error, Result};
use crate::gf2::{BitVec, PermutationArray};
use crate::peg::{self, PegVariant};
use crate::product::{build_hp, build_hp_interleaved};

pub const DEFAULT_MIN_FRAME_ERRORS: u64 = 50;

/// How the code under test is obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CodeRef {
    Product {
        comp_a: String,
        comp_b: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        interleaver: Option<InterleaverRef>,
    },
    /// Rate-1 pass-through of `n` bits.
    Uncoded { n: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InterleaverRef {
    /// Permutation-array JSON file; relative paths resolve against the
    /// config file's directory.
    File(PathBuf),
    Peg {
        variant: PegVariant,
        seed: u64,
    },
}

impl CodeRef {
    pub fn build(&self, base_dir: Option<&Path>) -> Result<Box<dyn BlockCode>> {
        match self {
            CodeRef::Uncoded { n } => {
                if *n == 0 {
                    return Err(Error::InvalidParameter(
                        "uncoded frame length must be positive".into(),
                    ));
                }
                Ok(Box::new(Uncoded::new(*n)))
            }
            CodeRef::Product {
                comp_a,
                comp_b,
                interleaver,
            } => {
                let a = comp_a.parse::<ComponentSpec>()?.build()?;
                let b = comp_b.parse::<ComponentSpec>()?.build()?;
                let pc = match interleaver {
                    None => build_hp(&a, &b),
                    Some(InterleaverRef::File(path)) => {
                        let path = match base_dir {
                            Some(d) if path.is_relative() => d.join(path),
                            _ => path.clone(),
                        };
                        let perms = PermutationArray::from_json(&std::fs::read_to_string(path)?)?;
                        build_hp_interleaved(&a, &b, &perms)?
                    }
                    Some(InterleaverRef::Peg { variant, seed }) => {
                        let perms = peg::design(*variant, &a, &b, *seed);
                        build_hp_interleaved(&a, &b, &perms)?
                    }
                };
                Ok(Box::new(pc))
            }
        }
    }
}

fn default_max_iter() -> usize {
    DEFAULT_MAX_ITER
}

fn default_min_frame_errors() -> u64 {
    DEFAULT_MIN_FRAME_ERRORS
}

fn default_workers() -> usize {
    1
}

fn default_batch() -> u64 {
    8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub code: CodeRef,
    pub ebn0_db: Vec<f64>,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_min_frame_errors")]
    pub min_frame_errors: u64,
    pub max_frames: u64,
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Frames per worker per round.
    #[serde(default = "default_batch")]
    pub batch: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ebn0_db.is_empty() {
            return Err(Error::InvalidParameter("Eb/N0 grid is empty".into()));
        }
        if let Some(x) = self.ebn0_db.iter().find(|x| x.is_nan()) {
            return Err(Error::InvalidParameter(format!(
                "Eb/N0 value {x} is not a number"
            )));
        }
        if self.min_frame_errors == 0 {
            return Err(Error::InvalidParameter(
                "min_frame_errors must be at least 1".into(),
            ));
        }
        if self.max_frames < self.min_frame_errors {
            return Err(Error::InvalidParameter(format!(
                "max_frames ({}) is below min_frame_errors ({})",
                self.max_frames, self.min_frame_errors
            )));
        }
        if self.max_iter == 0 || self.workers == 0 || self.batch == 0 {
            return Err(Error::InvalidParameter(
                "max_iter, workers and batch must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SimConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimPoint {
    pub ebn0_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub avg_iterations: f64,
    /// Fewer than `min_frame_errors` frame errors were observed.
    pub low_confidence: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub n: usize,
    pub k: usize,
    pub workers: usize,
    pub points: Vec<SimPoint>,
}

impl SimResult {
    pub fn to_csv(&self, meta: &[(String, String)]) -> String {
        let mut out = String::new();
        for (key, value) in meta {
            out.push_str(&format!("# {key}: {value}\n"));
        }
        out.push_str("# ber counts information-bit errors only\n");
        out.push_str("ebn0_db,frames,bit_errors,frame_errors,ber,fer,avg_iter,low_confidence\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{:e},{:e},{:.3},{}\n",
                p.ebn0_db,
                p.frames,
                p.bit_errors,
                p.frame_errors,
                p.ber,
                p.fer,
                p.avg_iterations,
                u8::from(p.low_confidence)
            ));
        }
        out
    }
}

/// Builds the configured code and sweeps it.
pub fn run_sweep(cfg: &SimConfig, base_dir: Option<&Path>) -> Result<SimResult> {
    cfg.validate()?;
    let code = cfg.code.build(base_dir)?;
    run_sweep_on(code.as_ref(), cfg)
}

/// Sweeps `code`; `cfg.code` is ignored.
pub fn run_sweep_on(code: &dyn BlockCode, cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let decoder = SpaDecoder::new(code.parity_check());
    let info_pos = code.info_positions();
    let points = cfg
        .ebn0_db
        .iter()
        .enumerate()
        .map(|(pi, &db)| run_point(code, &decoder, &info_pos, cfg, pi as u64, db))
        .collect::<Result<Vec<_>>>()?;
    Ok(SimResult {
        n: code.n(),
        k: code.k(),
        workers: cfg.workers,
        points,
    })
}

#[derive(Clone, Copy, Debug, Default)]
struct Tally {
    frames: u64,
    bit_errors: u64,
    frame_errors: u64,
    iterations: u64,
}

impl std::ops::AddAssign for Tally {
    fn add_assign(&mut self, o: Tally) {
        self.frames += o.frames;
        self.bit_errors += o.bit_errors;
        self.frame_errors += o.frame_errors;
        self.iterations += o.iterations;
    }
}

struct Worker {
    rng: ChaCha8Rng,
    ws: Workspace,
    llr: Vec<f64>,
}

fn run_point(
    code: &dyn BlockCode,
    decoder: &SpaDecoder,
    info_pos: &[usize],
    cfg: &SimConfig,
    point: u64,
    ebn0_db: f64,
) -> Result<SimPoint> {
    let ebn0 = 10f64.powf(ebn0_db / 10.0);
    let sigma2 = 1.0 / (2.0 * code.rate() * ebn0);
    let channel = Channel {
        sigma: sigma2.sqrt(),
        llr_scale: 2.0 / sigma2,
    };
    let mut workers: Vec<Worker> = (0..cfg.workers as u64)
        .map(|w| Worker {
            rng: ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, point, w)),
            ws: Workspace::default(),
            llr: Vec::with_capacity(code.n()),
        })
        .collect();

    let mut total = Tally::default();
    while total.frames < cfg.max_frames && total.frame_errors < cfg.min_frame_errors {
        let round = (cfg.max_frames - total.frames).min(cfg.batch * cfg.workers as u64);
        let share = |w: u64| round / cfg.workers as u64 + u64::from(w < round % cfg.workers as u64);
        let tallies: Vec<Result<Tally>> = if cfg.workers == 1 {
            vec![run_frames(
                code,
                decoder,
                info_pos,
                cfg.max_iter,
                &channel,
                &mut workers[0],
                round,
            )]
        } else {
            std::thread::scope(|s| {
                let handles: Vec<_> = workers
                    .iter_mut()
                    .enumerate()
                    .map(|(w, wk)| {
                        let frames = share(w as u64);
                        let channel = &channel;
                        s.spawn(move || {
                            run_frames(code, decoder, info_pos, cfg.max_iter, channel, wk, frames)
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("simulation worker panicked"))
                    .collect()
            })
        };
        for t in tallies {
            total += t?;
        }
    }

    let k = code.k() as f64;
    let frames = total.frames.max(1) as f64;
    Ok(SimPoint {
        ebn0_db,
        frames: total.frames,
        bit_errors: total.bit_errors,
        frame_errors: total.frame_errors,
        ber: total.bit_errors as f64 / (frames * k),
        fer: total.frame_errors as f64 / frames,
        avg_iterations: total.iterations as f64 / frames,
        low_confidence: total.frame_errors < cfg.min_frame_errors,
    })
}

struct Channel {
    sigma: f64,
    llr_scale: f64,
}

fn run_frames(
    code: &dyn BlockCode,
    decoder: &SpaDecoder,
    info_pos: &[usize],
    max_iter: usize,
    channel: &Channel,
    wk: &mut Worker,
    frames: u64,
) -> Result<Tally> {
    let k = code.k();
    let mut t = Tally::default();
    for _ in 0..frames {
        let info = random_bits(&mut wk.rng, k);
        let cw = code.encode(&info)?;
        wk.llr.clear();
        for b in cw.iter() {
            let x = if b { -1.0 } else { 1.0 };
            let noise: f64 = wk.rng.sample(StandardNormal);
            wk.llr.push(channel.llr_scale * (x + channel.sigma * noise));
        }
        let out = decoder.decode_with(&wk.llr, max_iter, &mut wk.ws)?;
        let errors = info_pos
            .iter()
            .zip(info.iter())
            .filter(|(&p, b)| out.hard_bits.get(p) != *b)
            .count() as u64;
        t.frames += 1;
        t.bit_errors += errors;
        t.frame_errors += u64::from(errors > 0);
        t.iterations += out.iterations_used as u64;
    }
    Ok(t)
}

fn random_bits(rng: &mut impl Rng, len: usize) -> BitVec {
    let mut v = BitVec::zeros(len);
    let mut word = 0u64;
    for i in 0..len {
        if i % 64 == 0 {
            word = rng.random();
        }
        if word >> (i % 64) & 1 == 1 {
            v.set(i, true);
        }
    }
    v
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of the stream used by `worker` at grid point `point`.
pub fn stream_seed(seed: u64, point: u64, worker: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ point) ^ worker.rotate_left(32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::q_function;

    fn uncoded_cfg(n: usize, db: Vec<f64>, frames: u64, workers: usize) -> SimConfig {
        SimConfig {
            code: CodeRef::Uncoded { n },
            ebn0_db: db,
            max_iter: 10,
            min_frame_errors: frames,
            max_frames: frames,
            seed: 17,
            workers,
            batch: 4,
        }
    }

    #[test]
    fn validation() {
        let mut c = uncoded_cfg(10, vec![1.0], 10, 1);
        assert!(c.validate().is_ok());
        c.ebn0_db.clear();
        assert!(c.validate().is_err());
        let mut c = uncoded_cfg(10, vec![1.0], 10, 1);
        c.max_frames = 5;
        assert!(c.validate().is_err());
        c.min_frame_errors = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn uncoded_ber_matches_q_function() {
        let cfg = uncoded_cfg(2000, vec![4.0], 100, 1);
        let r = run_sweep(&cfg, None).unwrap();
        let p = q_function((2.0 * 10f64.powf(0.4)).sqrt());
        let n = 2000.0 * 100.0;
        let sd = (p * (1.0 - p) / n).sqrt();
        assert!(
            (r.points[0].ber - p).abs() < 3.0 * sd,
            "{} vs {p}",
            r.points[0].ber
        );
    }

    #[test]
    fn noiseless_surrogate_has_no_errors() {
        let cfg = SimConfig {
            code: CodeRef::Product {
                comp_a: "mscmpc:5:3,4".into(),
                comp_b: "mscmpc:5:3,4".into(),
                interleaver: None,
            },
            ebn0_db: vec![200.0],
            max_iter: 20,
            min_frame_errors: 1,
            max_frames: 200,
            seed: 1,
            workers: 1,
            batch: 8,
        };
        let r = run_sweep(&cfg, None).unwrap();
        assert_eq!(r.points[0].frames, 200);
        assert_eq!(r.points[0].fer, 0.0);
        assert!(r.points[0].low_confidence);
    }

    #[test]
    fn reproducible_for_fixed_workers() {
        let cfg = SimConfig {
            code: CodeRef::Product {
                comp_a: "mscmpc:5:3,4".into(),
                comp_b: "mscmpc:5:3,4".into(),
                interleaver: Some(InterleaverRef::Peg {
                    variant: PegVariant::Generic,
                    seed: 3,
                }),
            },
            ebn0_db: vec![1.0, 2.0],
            max_iter: 20,
            min_frame_errors: 10,
            max_frames: 400,
            seed: 5,
            workers: 3,
            batch: 5,
        };
        let a = run_sweep(&cfg, None).unwrap();
        let b = run_sweep(&cfg, None).unwrap();
        assert_eq!(a, b);
        for p in &a.points {
            assert!(p.ber <= p.fer);
            assert!(p.frame_errors >= 10 || p.frames == 400);
            assert!(p.frames <= 400);
        }
    }

    #[test]
    fn csv_layout() {
        let r = run_sweep(&uncoded_cfg(10, vec![0.0, 3.0], 4, 2), None).unwrap();
        let csv = r.to_csv(&[("seed".into(), "17".into())]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# seed: 17");
        assert_eq!(
            lines[2],
            "ebn0_db,frames,bit_errors,frame_errors,ber,fer,avg_iter,low_confidence"
        );
        assert_eq!(lines.len(), 5);
        assert!(lines[3].starts_with("0,4,"));
    }

    #[test]
    fn config_json_defaults() {
        let cfg = SimConfig::from_json(
            r#"{"code": {"type": "product", "comp_a": "spc:3", "comp_b": "spc:3",
                "interleaver": {"peg": {"variant": "circulant", "seed": 2}}},
                "ebn0_db": [1, 2], "max_frames": 100, "seed": 9}"#,
        )
        .unwrap();
        assert_eq!(cfg.min_frame_errors, DEFAULT_MIN_FRAME_ERRORS);
        assert_eq!(cfg.max_iter, DEFAULT_MAX_ITER);
        let file = SimConfig::from_json(
            r#"{"code": {"type": "product", "comp_a": "spc:3", "comp_b": "spc:3",
                "interleaver": {"file": "p.json"}}, "ebn0_db": [1], "max_frames": 100, "seed": 9}"#,
        )
        .unwrap();
        assert!(matches!(
            file.code,
            CodeRef::Product {
                interleaver: Some(InterleaverRef::File(_)),
                ..
            }
        ));
        assert!(SimConfig::from_json(
            r#"{"code": {"type": "uncoded", "n": 4}, "ebn0_db": [], "max_frames": 1, "seed": 0}"#
        )
        .is_err());
    }
}
