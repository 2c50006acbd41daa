//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --release -p ipldpc --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use ipldpc::analysis::{self, low_weight_search, union_bound, union_bound_linear, WeightSpectrum};
use ipldpc::code::{BlockCode, Uncoded};
use ipldpc::peg::{self, component_girth, local_girth, PegVariant};
use ipldpc::sim::{run_sweep_on, CodeRef, SimConfig, SimPoint};
use ipldpc::{
    build_hp, build_hp_interleaved, build_mscmpc, exhaustive_spectrum, BitVec, ComponentCode,
    PermutationArray, SpaDecoder,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VARIANTS: [PegVariant; 2] = [PegVariant::Generic, PegVariant::Circulant];

type Criterion = (usize, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn c100() -> ComponentCode {
    build_mscmpc(81, &[9, 10]).unwrap()
}

fn c12() -> ComponentCode {
    build_mscmpc(5, &[3, 4]).unwrap()
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn random_info(rng: &mut ChaCha8Rng, k: usize) -> BitVec {
    BitVec::from_bools(&(0..k).map(|_| rng.random()).collect::<Vec<_>>())
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for (k, r, n, a4) in [(81, [9, 10], 100, 2025u64), (169, [13, 14], 196, 8281)] {
        let c = build_mscmpc(k, &r).unwrap();
        let g = component_girth(&c);
        let s = low_weight_search(&c, 4).unwrap();
        let ok = c.n() == n
            && c.k() == k
            && g.is_some_and(|g| g >= 6)
            && s.min_distance() == Some(4)
            && s.count(4) == a4;
        pass &= ok;
        notes.push(format!(
            "({},{}) girth {:?} d {:?} A4 {}",
            c.n(),
            c.k(),
            g,
            s.min_distance(),
            s.count(4)
        ));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_2() -> Outcome {
    let a = c12();
    let pc = build_hp(&a, &a);
    let s = exhaustive_spectrum(&pc).unwrap();
    let expect = [
        (16, 64),
        (20, 0),
        (22, 0),
        (24, 246),
        (26, 0),
        (28, 504),
        (30, 392),
        (32, 1262),
    ];
    let pass = s.complete
        && s.min_distance() == Some(16)
        && s.total() == 1 << 25
        && expect.iter().all(|&(w, c)| s.count(w) == c);
    let got: Vec<String> = expect
        .iter()
        .map(|&(w, _)| format!("A{w}={}", s.count(w)))
        .collect();
    outcome(pass, got.join(" "))
}

fn criterion_3() -> Outcome {
    let a = c12();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut arrays: Vec<(String, PermutationArray)> = Vec::new();
    for v in VARIANTS {
        for seed in 0..10 {
            arrays.push((format!("{v}/{seed}"), peg::design(v, &a, &a, seed)));
        }
    }
    for i in 0..10 {
        let perms = (0..a.n())
            .map(|_| {
                let mut p: Vec<usize> = (0..a.n()).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect();
        arrays.push((
            format!("random/{i}"),
            PermutationArray::new(a.n(), perms).unwrap(),
        ));
    }
    let mut bad = Vec::new();
    for (name, p) in &arrays {
        let code = build_hp_interleaved(&a, &a, p).unwrap();
        let nonzero = (0..1000)
            .filter(|_| {
                let x = code.encode(&random_info(&mut rng, code.k())).unwrap();
                !code.h().is_codeword(&x).unwrap()
            })
            .count();
        if nonzero > 0 {
            bad.push(format!("{name}: {nonzero}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} interleavers x 1000 frames, nonzero syndromes: {}",
            arrays.len(),
            if bad.is_empty() {
                "none".into()
            } else {
                bad.join(", ")
            }
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for (label, a) in [("(144,25)", c12()), ("(10000,6561)", c100())] {
        let ga = component_girth(&a);
        let bound = peg::product_girth_bound(ga, ga);
        let mut hs = vec![("PC".to_string(), build_hp(&a, &a).h().clone())];
        for v in VARIANTS {
            let p = peg::design(v, &a, &a, 1);
            hs.push((
                format!("iPC-{v}"),
                build_hp_interleaved(&a, &a, &p).unwrap().h().clone(),
            ));
        }
        for (name, h) in hs {
            let r = local_girth(&h);
            let ok = bound >= 6 && r.at_least(Some(bound));
            pass &= ok;
            notes.push(format!(
                "{label} {name} girth {:?} (bound {bound})",
                r.global_girth
            ));
        }
    }
    outcome(pass, notes.join("; "))
}

fn criterion_5() -> Outcome {
    let a = c12();
    let mut pass = true;
    let mut notes = Vec::new();
    for v in VARIANTS {
        let mut a16 = Vec::new();
        let mut all_sixteen = true;
        for seed in 0..10 {
            let p = peg::design(v, &a, &a, seed);
            let s = exhaustive_spectrum(&build_hp_interleaved(&a, &a, &p).unwrap()).unwrap();
            all_sixteen &= s.min_distance() == Some(16);
            a16.push(s.count(16));
        }
        let thin = a16.iter().filter(|&&c| c <= 64).count();
        pass &= all_sixteen && thin >= 8;
        notes.push(format!("{v}: d=16 for all: {all_sixteen}, A16 {a16:?}"));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_6() -> Outcome {
    let a = c100();
    let pc = build_hp(&a, &a);
    let dec = SpaDecoder::new(pc.h());
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut clean = true;
    for _ in 0..20 {
        let x = pc.encode(&random_info(&mut rng, pc.k())).unwrap();
        let llr: Vec<f64> = x.iter().map(|b| if b { -8.0 } else { 8.0 }).collect();
        let r = dec.decode(&llr, 100).unwrap();
        clean &= r.converged && r.iterations_used == 1 && r.hard_bits == x;
    }
    let mut notes = vec![format!("noiseless in 1 iteration: {clean}")];
    let mut pass = clean;
    let cfg = SimConfig {
        code: CodeRef::Uncoded { n: 10_000 },
        ebn0_db: vec![2.0, 4.0, 6.0],
        max_iter: 1,
        min_frame_errors: 400,
        max_frames: 400,
        seed: 6,
        workers: workers(),
        batch: 8,
    };
    let res = run_sweep_on(&Uncoded::new(10_000), &cfg).unwrap();
    for p in &res.points {
        let q = analysis::q_function((2.0 * 10f64.powf(p.ebn0_db / 10.0)).sqrt());
        let bits = (p.frames * 10_000) as f64;
        let sigma = (q * (1.0 - q) / bits).sqrt();
        let ok = (p.ber - q).abs() <= 3.0 * sigma;
        pass &= ok;
        notes.push(format!(
            "{} dB BER {:.4e} vs {:.4e} ({:.1} sigma)",
            p.ebn0_db,
            p.ber,
            q,
            (p.ber - q).abs() / sigma
        ));
    }
    outcome(pass, notes.join("; "))
}

fn point(code: &dyn BlockCode, ebn0: f64, seed: u64) -> SimPoint {
    let cfg = SimConfig {
        code: CodeRef::Uncoded { n: code.n() },
        ebn0_db: vec![ebn0],
        max_iter: 100,
        min_frame_errors: 50,
        max_frames: 4000,
        seed,
        workers: workers(),
        batch: 8,
    };
    run_sweep_on(code, &cfg).unwrap().points.remove(0)
}

fn criterion_7() -> Outcome {
    let a = c100();
    let pc = build_hp(&a, &a);
    let mut reached = None;
    let mut notes = Vec::new();
    for i in 0..9 {
        let e = 2.0 + 0.25 * i as f64;
        let p = point(&pc, e, 7);
        notes.push(format!(
            "PC {e} dB FER {:.2e} ({}/{})",
            p.fer, p.frame_errors, p.frames
        ));
        if p.fer <= 1e-2 {
            reached = Some(p);
            break;
        }
    }
    let Some(pc_point) = reached else {
        return outcome(
            false,
            format!("PC never reached FER 1e-2: {}", notes.join(", ")),
        );
    };
    let perm = peg::design_generic(&a, &a, 1);
    let ipc = build_hp_interleaved(&a, &a, &perm).unwrap();
    let e = pc_point.ebn0_db - 0.5;
    let q = point(&ipc, e, 7);
    notes.push(format!(
        "iPC-RP {e} dB FER {:.2e} ({}/{})",
        q.fer, q.frame_errors, q.frames
    ));
    outcome(q.fer <= pc_point.fer, notes.join(", "))
}

fn criterion_8() -> Outcome {
    let a_d = 2025u64 * 2025;
    let s = WeightSpectrum::truncated(10_000, 6561, &[(16, a_d)]);
    let rate = 0.6561;
    let grid: Vec<f64> = (0..=40).map(|i| -5.0 + 0.25 * i as f64).collect();
    let pts = union_bound(&s, rate, &grid).unwrap();
    let monotone = pts
        .windows(2)
        .all(|w| w[1].fer_ub < w[0].fer_ub && w[1].ber_ub < w[0].ber_ub);
    let ordered = pts.iter().all(|p| p.ber_ub <= p.fer_ub);
    let (fer0, ber0) = union_bound_linear(&s, rate, 0.0).unwrap();
    let limit = a_d as f64 / 2.0;
    let rel = (fer0 - limit).abs() / limit;
    let rel_ber = (ber0 - limit * 16.0 / 10_000.0).abs() / (limit * 16.0 / 10_000.0);
    let (near, _) = union_bound_linear(&s, rate, 1e-30).unwrap();
    let pass = monotone
        && ordered
        && rel <= 1e-12
        && rel_ber <= 1e-12
        && (near - limit).abs() / limit <= 1e-12;
    outcome(
        pass,
        format!("monotone {monotone}, BER<=FER {ordered}, FER(0)={fer0:e} vs A_d/2={limit:e} (rel {rel:e})"),
    )
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture are accepted and ignored.
    let criteria: [Criterion; 8] = [
        (1, "component oracle", criterion_1),
        (2, "direct product spectrum", criterion_2),
        (3, "interleaved encoder consistency", criterion_3),
        (4, "girth bound", criterion_4),
        (5, "distance preservation", criterion_5),
        (6, "decoder sanity", criterion_6),
        (7, "waterfall gain", criterion_7),
        (8, "union bound", criterion_8),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let t = Instant::now();
        let o = f();
        failed += usize::from(!o.pass);
        println!(
            "{} criterion {id} ({name}) [{:.1}s]: {}",
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
