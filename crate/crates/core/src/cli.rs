//! Command-line front end. Each subcommand parses and validates its inputs,
//! calls into the library and writes its outputs.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::analysis::{self, WeightSpectrum};
use crate::component::{ComponentCode, ComponentSpec};
use crate::decoder::{SpaDecoder, DEFAULT_MAX_ITER};
use crate::error::{Error, Result};
use crate::gf2::{alist, BitVec, PermutationArray};
use crate::peg::{self, PegVariant};
use crate::product::{build_hp, build_hp_interleaved, unreduced_hp, ProductCode};
use crate::sim::{self, SimConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "ipldpc",
    version,
    about = "Direct and column-interleaved product LDPC codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a product-code parity-check matrix and write it as alist.
    Construct {
        #[command(flatten)]
        code: ProductArgs,
        /// Keep the redundant last r_a*r_b rows of the row part.
        #[arg(long)]
        unreduced: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Design a column interleaver with the modified PEG algorithm.
    Peg {
        #[arg(long)]
        variant: PegVariant,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        comp_a: ComponentSpec,
        #[arg(long)]
        comp_b: ComponentSpec,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report the girth and local-girth histogram of an alist matrix.
    Girth {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive weight spectrum of a product code (k <= 28).
    Spectrum {
        /// Component used for both dimensions together with --square.
        #[arg(long, conflicts_with_all = ["comp_a", "comp_b"])]
        comp: Option<ComponentSpec>,
        #[arg(long, requires = "comp")]
        square: bool,
        #[arg(long)]
        comp_a: Option<ComponentSpec>,
        #[arg(long)]
        comp_b: Option<ComponentSpec>,
        #[command(flatten)]
        interleaver: InterleaverArgs,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Low-weight codeword counts of a component code.
    Mindist {
        #[arg(long)]
        comp: ComponentSpec,
        #[arg(long, default_value_t = analysis::MAX_LOW_WEIGHT)]
        w_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Union bound on FER and BER as CSV.
    Bound {
        /// Spectrum JSON as written by `spectrum` or `mindist`.
        #[arg(long, conflicts_with = "term")]
        spectrum: Option<PathBuf>,
        /// Spectrum term `weight:multiplicity`; may be repeated.
        #[arg(long)]
        term: Vec<String>,
        /// Code length and dimension when terms are given by hand.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Code rate; defaults to k/n.
        #[arg(long)]
        rate: Option<f64>,
        /// Comma-separated Eb/N0 values in dB.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        ebn0: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encode information blocks (one line of k_b*k_a bits each).
    Encode {
        #[command(flatten)]
        code: ProductArgs,
        #[arg(long, conflicts_with = "random")]
        info: Option<PathBuf>,
        /// Encode this many random blocks instead of reading --info.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sum-product decode LLR frames against an alist matrix.
    Decode {
        #[arg(long)]
        alist: PathBuf,
        /// Whitespace-separated LLRs, frames concatenated.
        #[arg(long)]
        llr: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo BER/FER sweep described by a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's worker count.
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Args, Debug)]
pub struct ProductArgs {
    #[arg(long)]
    pub comp_a: ComponentSpec,
    #[arg(long)]
    pub comp_b: ComponentSpec,
    #[command(flatten)]
    pub interleaver: InterleaverArgs,
}

#[derive(Args, Debug)]
pub struct InterleaverArgs {
    /// Permutation-array JSON.
    #[arg(long, conflicts_with = "peg")]
    pub perms: Option<PathBuf>,
    /// Design the interleaver on the fly.
    #[arg(long)]
    pub peg: Option<PegVariant>,
    #[arg(long = "peg-seed", default_value_t = 0)]
    pub peg_seed: u64,
}

impl InterleaverArgs {
    fn load(&self, a: &ComponentCode, b: &ComponentCode) -> Result<Option<PermutationArray>> {
        if let Some(path) = &self.perms {
            return Ok(Some(PermutationArray::from_json(&read(path)?)?));
        }
        if let Some(v) = self.peg {
            println!("peg seed: {}", self.peg_seed);
            return Ok(Some(peg::design(v, a, b, self.peg_seed)));
        }
        Ok(None)
    }

    fn describe(&self) -> serde_json::Value {
        match (&self.perms, self.peg) {
            (Some(p), _) => json!({"perms": p.display().to_string()}),
            (None, Some(v)) => json!({"peg": v.to_string(), "seed": self.peg_seed}),
            _ => serde_json::Value::Null,
        }
    }
}

fn build_product(
    a: &ComponentCode,
    b: &ComponentCode,
    p: Option<&PermutationArray>,
) -> Result<ProductCode> {
    match p {
        Some(p) => build_hp_interleaved(a, b, p),
        None => Ok(build_hp(a, b)),
    }
}

fn meta(command: &str, params: serde_json::Value) -> serde_json::Value {
    json!({"tool": "ipldpc", "version": VERSION, "command": command, "params": params})
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn comment_header(meta: &serde_json::Value) -> String {
    format!(
        "# {}\n",
        serde_json::to_string(meta).expect("metadata serializes")
    )
}

/// Parses arguments and runs; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Construct {
            code,
            unreduced,
            out,
        } => {
            let a = code.comp_a.build()?;
            let b = code.comp_b.build()?;
            let perms = code.interleaver.load(&a, &b)?;
            let h = if unreduced {
                unreduced_hp(&a, &b, perms.as_ref())?
            } else {
                build_product(&a, &b, perms.as_ref())?.h().clone()
            };
            write(&out, &alist::write_alist(&h))?;
            let m = meta(
                "construct",
                json!({"comp_a": code.comp_a.to_string(), "comp_b": code.comp_b.to_string(),
                       "interleaver": code.interleaver.describe(), "unreduced": unreduced,
                       "n": a.n() * b.n(), "k": a.k() * b.k(), "rows": h.rows()}),
            );
            write(&sidecar(&out), &serde_json::to_string_pretty(&m)?)?;
            println!(
                "(n, k) = ({}, {}), H is {} x {}",
                a.n() * b.n(),
                a.k() * b.k(),
                h.rows(),
                h.cols()
            );
        }
        Command::Peg {
            variant,
            seed,
            comp_a,
            comp_b,
            out,
        } => {
            let a = comp_a.build()?;
            let b = comp_b.build()?;
            println!("seed: {seed}");
            let p = peg::design(variant, &a, &b, seed);
            let m = meta(
                "peg",
                json!({"variant": variant.to_string(), "seed": seed,
                       "comp_a": comp_a.to_string(), "comp_b": comp_b.to_string()}),
            );
            write(&out, &p.to_json(Some(m))?)?;
        }
        Command::Girth { input, out } => {
            let h = alist::read_alist(&read(&input)?)?;
            let r = peg::local_girth(&h);
            match r.global_girth {
                Some(g) => println!("girth: {g}"),
                None => println!("girth: inf"),
            }
            for (len, count) in &r.histogram {
                println!("  local girth {len}: {count} variables");
            }
            println!("  acyclic: {} variables", r.acyclic_variables());
            if let Some(out) = out {
                let mut v = serde_json::to_value(&r)?;
                v["meta"] = meta("girth", json!({"in": input.display().to_string()}));
                write(&out, &serde_json::to_string_pretty(&v)?)?;
            }
        }
        Command::Spectrum {
            comp,
            square,
            comp_a,
            comp_b,
            interleaver,
            workers,
            out,
        } => {
            let (sa, sb) = match (comp, comp_a, comp_b) {
                (Some(c), None, None) if square => (c.clone(), c),
                (Some(_), _, _) => {
                    return Err(Error::InvalidParameter("--comp needs --square".into()))
                }
                (None, Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::InvalidParameter(
                        "give --comp X --square or both --comp-a and --comp-b".into(),
                    ))
                }
            };
            let a = sa.build()?;
            let b = sb.build()?;
            if a.k() * b.k() > analysis::MAX_EXHAUSTIVE_K {
                return Err(Error::ResourceGuard(format!(
                    "k = {} exceeds the exhaustive guard of {}; use `mindist` on the components",
                    a.k() * b.k(),
                    analysis::MAX_EXHAUSTIVE_K
                )));
            }
            let perms = interleaver.load(&a, &b)?;
            let pc = build_product(&a, &b, perms.as_ref())?;
            let s = analysis::exhaustive_spectrum_parallel(&pc, workers)?;
            for (w, c) in s.counts.iter().skip(1).take(8) {
                println!("A_{w} = {c}");
            }
            let m = meta(
                "spectrum",
                json!({"comp_a": sa.to_string(), "comp_b": sb.to_string(),
                       "interleaver": interleaver.describe(), "workers": workers}),
            );
            write(&out, &s.to_json(Some(m))?)?;
        }
        Command::Mindist { comp, w_max, out } => {
            let c = comp.build()?;
            let s = analysis::low_weight_search(&c, w_max)?;
            match s.min_distance() {
                Some(d) => println!("d = {d}, A_{d} = {}", s.count(d)),
                None => println!("no codewords of weight <= {w_max}"),
            }
            if let Some(out) = out {
                let m = meta("mindist", json!({"comp": comp.to_string(), "w_max": w_max}));
                write(&out, &s.to_json(Some(m))?)?;
            }
        }
        Command::Bound {
            spectrum,
            term,
            n,
            k,
            rate,
            ebn0,
            out,
        } => {
            let s = match spectrum {
                Some(p) => WeightSpectrum::from_json(&read(&p)?)?,
                None => {
                    let (Some(n), Some(k)) = (n, k) else {
                        return Err(Error::InvalidParameter("--term needs --n and --k".into()));
                    };
                    let terms = term
                        .iter()
                        .map(|t| parse_term(t))
                        .collect::<Result<Vec<_>>>()?;
                    WeightSpectrum::truncated(n, k, &terms)
                }
            };
            let rate = rate.unwrap_or(s.k as f64 / s.n as f64);
            let points = analysis::union_bound(&s, rate, &ebn0)?;
            let m = meta(
                "bound",
                json!({"n": s.n, "k": s.k, "rate": rate, "complete": s.complete,
                       "ber_weighting": "w/n"}),
            );
            let mut csv = comment_header(&m);
            csv.push_str("ebn0_db,fer_ub,ber_ub\n");
            for p in points {
                csv.push_str(&format!("{},{:e},{:e}\n", p.ebn0_db, p.fer_ub, p.ber_ub));
            }
            write(&out, &csv)?;
        }
        Command::Encode {
            code,
            info,
            random,
            seed,
            out,
        } => {
            let a = code.comp_a.build()?;
            let b = code.comp_b.build()?;
            let perms = code.interleaver.load(&a, &b)?;
            let pc = build_product(&a, &b, perms.as_ref())?;
            let blocks = match (info, random) {
                (Some(path), None) => parse_bit_lines(&read(&path)?, pc.k())?,
                (None, Some(count)) => {
                    println!("seed: {seed}");
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (0..count)
                        .map(|_| {
                            BitVec::from_bools(
                                &(0..pc.k()).map(|_| rng.random()).collect::<Vec<_>>(),
                            )
                        })
                        .collect()
                }
                _ => {
                    return Err(Error::InvalidParameter(
                        "give --info FILE or --random N".into(),
                    ))
                }
            };
            let m = meta(
                "encode",
                json!({"comp_a": code.comp_a.to_string(), "comp_b": code.comp_b.to_string(),
                       "interleaver": code.interleaver.describe(), "seed": seed}),
            );
            let mut text = comment_header(&m);
            for block in &blocks {
                text.push_str(&pc.encode(block)?.to_string());
                text.push('\n');
            }
            write(&out, &text)?;
            println!("encoded {} blocks", blocks.len());
        }
        Command::Decode {
            alist: path,
            llr,
            max_iter,
            out,
        } => {
            let h = alist::read_alist(&read(&path)?)?;
            let values = parse_llrs(&read(&llr)?)?;
            let n = h.cols();
            if n == 0 || values.len() % n != 0 {
                return Err(Error::Dimension(format!(
                    "{} LLRs is not a whole number of {n}-bit frames",
                    values.len()
                )));
            }
            let dec = SpaDecoder::new(&h);
            let m = meta(
                "decode",
                json!({"alist": path.display().to_string(), "llr": llr.display().to_string(), "max_iter": max_iter}),
            );
            let mut text = comment_header(&m);
            let mut converged = 0;
            for frame in values.chunks(n) {
                let r = dec.decode(frame, max_iter)?;
                converged += usize::from(r.converged);
                text.push_str(&format!(
                    "{} {} {}\n",
                    r.hard_bits,
                    r.iterations_used,
                    u8::from(r.converged)
                ));
            }
            write(&out, &text)?;
            println!("decoded {} frames, {converged} converged", values.len() / n);
        }
        Command::Simulate {
            config,
            out,
            workers,
        } => {
            let mut cfg = SimConfig::from_json(&read(&config)?)?;
            if let Some(w) = workers {
                cfg.workers = w;
            }
            cfg.validate()?;
            println!("seed: {}", cfg.seed);
            let base = config.parent();
            let r = sim::run_sweep(&cfg, base)?;
            for p in &r.points {
                println!(
                    "Eb/N0 {:>6} dB  frames {:>8}  FER {:.3e}  BER {:.3e}{}",
                    p.ebn0_db,
                    p.frames,
                    p.fer,
                    p.ber,
                    if p.low_confidence {
                        "  (low confidence)"
                    } else {
                        ""
                    }
                );
            }
            let m = meta("simulate", serde_json::to_value(&cfg)?);
            let csv = r.to_csv(&[
                ("meta".into(), serde_json::to_string(&m)?),
                ("n".into(), r.n.to_string()),
                ("k".into(), r.k.to_string()),
                ("workers".into(), r.workers.to_string()),
            ]);
            write(&out, &csv)?;
        }
    }
    Ok(())
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn parse_term(t: &str) -> Result<(usize, u64)> {
    let bad = || Error::Parse(format!("term '{t}' must be weight:multiplicity"));
    let (w, a) = t.split_once(':').ok_or_else(bad)?;
    Ok((
        w.trim().parse().map_err(|_| bad())?,
        a.trim().parse().map_err(|_| bad())?,
    ))
}

/// One block per non-comment line; spaces between bits are allowed.
fn parse_bit_lines(text: &str, k: usize) -> Result<Vec<BitVec>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(i, line)| {
            let bits: Vec<bool> = line
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::Parse(format!("block {}: '{c}' is not a bit", i + 1))),
                })
                .collect::<Result<_>>()?;
            if bits.len() != k {
                return Err(Error::Dimension(format!(
                    "block {} has {} bits, the code takes {k}",
                    i + 1,
                    bits.len()
                )));
            }
            Ok(BitVec::from_bools(&bits))
        })
        .collect()
}

fn parse_llrs(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace)
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::Parse(format!("'{t}' is not a number")))
        })
        .collect()
}
