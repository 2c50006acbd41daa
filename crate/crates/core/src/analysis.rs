//! Weight spectra (exhaustive and low-weight), and union bounds for BPSK over
//! AWGN under maximum-likelihood decoding.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::code::BlockCode;
use crate::error::{Error, Result};
use crate::gf2::{BitVec, SparseBinMatrix};

/// Largest dimension accepted by [`exhaustive_spectrum`].
pub const MAX_EXHAUSTIVE_K: usize = 28;

/// Largest weight handled by [`low_weight_search`].
pub const MAX_LOW_WEIGHT: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSpectrum {
    pub n: usize,
    pub k: usize,
    /// `false` when only low weights were searched or terms were supplied
    /// by hand.
    pub complete: bool,
    #[serde(with = "string_keys")]
    pub counts: BTreeMap<usize, u64>,
}

mod string_keys {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<usize, u64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k.to_string(), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, u64>, D::Error> {
        let raw: BTreeMap<String, u64> = BTreeMap::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                k.parse::<usize>()
                    .map(|w| (w, v))
                    .map_err(|_| D::Error::custom(format!("weight key '{k}' is not an integer")))
            })
            .collect()
    }
}

impl WeightSpectrum {
    /// Hand-supplied partial spectrum; `A_0 = 1` is implied.
    pub fn truncated(n: usize, k: usize, terms: &[(usize, u64)]) -> Self {
        let mut counts = BTreeMap::from([(0, 1)]);
        for &(w, a) in terms {
            if a > 0 {
                *counts.entry(w).or_insert(0) += a;
            }
        }
        WeightSpectrum {
            n,
            k,
            complete: false,
            counts,
        }
    }

    pub fn count(&self, w: usize) -> u64 {
        self.counts.get(&w).copied().unwrap_or(0)
    }

    /// Smallest nonzero weight with a nonzero count.
    pub fn min_distance(&self) -> Option<usize> {
        self.counts
            .iter()
            .find(|(&w, &a)| w > 0 && a > 0)
            .map(|(&w, _)| w)
    }

    pub fn total(&self) -> u128 {
        self.counts.values().map(|&a| a as u128).sum()
    }

    pub fn to_json(&self, meta: Option<serde_json::Value>) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(m) = meta {
            v["meta"] = m;
        }
        Ok(serde_json::to_string_pretty(&v)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Packed codeword used by the enumerator.
fn pack(v: &BitVec) -> Vec<u64> {
    let mut w = vec![0u64; v.len().div_ceil(64)];
    for i in v.ones() {
        w[i >> 6] |= 1 << (i & 63);
    }
    w
}

/// Full weight distribution over all `2^k` codewords, walking information
/// words in Gray-code order so that each step adds one generator row.
pub fn exhaustive_spectrum(code: &dyn BlockCode) -> Result<WeightSpectrum> {
    exhaustive_spectrum_parallel(code, 1)
}

/// As [`exhaustive_spectrum`], splitting the Gray sequence into `workers`
/// contiguous ranges. The result does not depend on `workers`.
pub fn exhaustive_spectrum_parallel(
    code: &dyn BlockCode,
    workers: usize,
) -> Result<WeightSpectrum> {
    let (n, k) = (code.n(), code.k());
    if k > MAX_EXHAUSTIVE_K {
        return Err(Error::ResourceGuard(format!(
            "exhaustive enumeration of 2^{k} codewords exceeds the k <= {MAX_EXHAUSTIVE_K} guard; \
             use the low-weight search instead"
        )));
    }
    let gens: Vec<Vec<u64>> = (0..k)
        .map(|i| code.encode(&BitVec::from_ones(k, &[i])).map(|c| pack(&c)))
        .collect::<Result<_>>()?;
    let words = n.div_ceil(64);
    let total: u64 = 1 << k;
    let workers = workers.clamp(1, total as usize);
    let chunk = total.div_ceil(workers as u64);

    let run = |lo: u64, hi: u64| -> Vec<u64> {
        let mut hist = vec![0u64; n + 1];
        let mut cw = vec![0u64; words];
        let gray = lo ^ (lo >> 1);
        for (i, g) in gens.iter().enumerate() {
            if gray >> i & 1 == 1 {
                cw.iter_mut().zip(g).for_each(|(a, b)| *a ^= b);
            }
        }
        let weight = |cw: &[u64]| cw.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        if lo < hi {
            hist[weight(&cw)] += 1;
        }
        for t in lo + 1..hi {
            let g = &gens[t.trailing_zeros() as usize];
            cw.iter_mut().zip(g).for_each(|(a, b)| *a ^= b);
            hist[weight(&cw)] += 1;
        }
        hist
    };

    let hists: Vec<Vec<u64>> = if workers == 1 {
        vec![run(0, total)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers as u64)
                .map(|w| {
                    let (lo, hi) = (w * chunk, ((w + 1) * chunk).min(total));
                    s.spawn(move || run(lo, hi))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };

    let mut counts = BTreeMap::new();
    for h in hists {
        for (w, &a) in h.iter().enumerate() {
            if a > 0 {
                *counts.entry(w).or_insert(0) += a;
            }
        }
    }
    Ok(WeightSpectrum {
        n,
        k,
        complete: true,
        counts,
    })
}

/// Counts of codewords of weight `1..=w_max` (`w_max <= 4`) from column
/// sums of the parity-check matrix. Weight-4 words are pairs of disjoint
/// column pairs with equal sums.
pub fn low_weight_search(code: &dyn BlockCode, w_max: usize) -> Result<WeightSpectrum> {
    let counts = low_weight_counts(code.parity_check(), w_max)?;
    let mut spec = WeightSpectrum::truncated(code.n(), code.k(), &[]);
    spec.counts
        .extend(counts.into_iter().filter(|&(_, a)| a > 0));
    Ok(spec)
}

/// `(weight, count)` for every weight in `1..=w_max`.
pub fn low_weight_counts(h: &SparseBinMatrix, w_max: usize) -> Result<Vec<(usize, u64)>> {
    if w_max > MAX_LOW_WEIGHT {
        return Err(Error::InvalidParameter(format!(
            "low-weight search supports weights up to {MAX_LOW_WEIGHT}, asked for {w_max}"
        )));
    }
    let n = h.cols();
    let words = h.rows().div_ceil(64).max(1);
    let mut cols = vec![vec![0u64; words]; n];
    for (r, row) in h.row_supports().iter().enumerate() {
        for &c in row {
            cols[c][r >> 6] |= 1 << (r & 63);
        }
    }
    let by_value: HashMap<&[u64], Vec<usize>> =
        cols.iter()
            .enumerate()
            .fold(HashMap::new(), |mut m, (i, c)| {
                m.entry(c.as_slice()).or_default().push(i);
                m
            });
    let zero = vec![0u64; words];
    let choose2 = |x: u64| x * x.saturating_sub(1) / 2;

    let mut out = Vec::with_capacity(w_max);
    if w_max >= 1 {
        out.push((
            1,
            by_value.get(zero.as_slice()).map_or(0, |v| v.len() as u64),
        ));
    }
    if w_max >= 2 {
        out.push((2, by_value.values().map(|v| choose2(v.len() as u64)).sum()));
    }
    if w_max >= 3 {
        let mut triples = 0u64;
        let mut s = vec![0u64; words];
        for a in 0..n {
            for b in a + 1..n {
                xor_into(&mut s, &cols[a], &cols[b]);
                if let Some(list) = by_value.get(s.as_slice()) {
                    triples += list.iter().filter(|&&c| c != a && c != b).count() as u64;
                }
            }
        }
        out.push((3, triples / 3));
    }
    if w_max >= 4 {
        let mut classes: HashMap<Vec<u64>, Vec<(u32, u32)>> = HashMap::new();
        let mut s = vec![0u64; words];
        for a in 0..n {
            for b in a + 1..n {
                xor_into(&mut s, &cols[a], &cols[b]);
                classes
                    .entry(s.clone())
                    .or_default()
                    .push((a as u32, b as u32));
            }
        }
        let mut disjoint = 0u64;
        let mut touch: HashMap<u32, u64> = HashMap::new();
        for pairs in classes.values() {
            if pairs.len() < 2 {
                continue;
            }
            touch.clear();
            for &(a, b) in pairs {
                *touch.entry(a).or_insert(0) += 1;
                *touch.entry(b).or_insert(0) += 1;
            }
            let overlapping: u64 = touch.values().map(|&t| choose2(t)).sum();
            disjoint += choose2(pairs.len() as u64) - overlapping;
        }
        // Each zero-sum 4-set splits into disjoint pairs in three ways.
        out.push((4, disjoint / 3));
    }
    Ok(out)
}

fn xor_into(out: &mut [u64], a: &[u64], b: &[u64]) {
    for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
        *o = x ^ y;
    }
}

/// Gaussian tail probability `Q(x) = erfc(x / sqrt 2) / 2`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    pub ebn0_db: f64,
    pub fer_ub: f64,
    pub ber_ub: f64,
}

/// Union bounds at each `Eb/N0` in dB. The BER bound weights each term by
/// `w / n`.
pub fn union_bound(
    spectrum: &WeightSpectrum,
    rate: f64,
    ebn0_db: &[f64],
) -> Result<Vec<BoundPoint>> {
    ebn0_db
        .iter()
        .map(|&db| {
            let (fer_ub, ber_ub) = union_bound_linear(spectrum, rate, 10f64.powf(db / 10.0))?;
            Ok(BoundPoint {
                ebn0_db: db,
                fer_ub,
                ber_ub,
            })
        })
        .collect()
}

/// `(FER_UB, BER_UB)` at a linear `Eb/N0`.
pub fn union_bound_linear(spectrum: &WeightSpectrum, rate: f64, ebn0: f64) -> Result<(f64, f64)> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rate {rate} outside (0, 1]"
        )));
    }
    if ebn0.is_nan() || ebn0 < 0.0 {
        return Err(Error::InvalidParameter(format!("Eb/N0 {ebn0} is negative")));
    }
    if spectrum.n == 0 || spectrum.min_distance().is_none() {
        return Err(Error::InvalidParameter(
            "union bound needs at least one nonzero-weight term".into(),
        ));
    }
    let n = spectrum.n as f64;
    let mut fer = 0.0;
    let mut ber = 0.0;
    for (&w, &a) in spectrum.counts.iter().filter(|(&w, &a)| w > 0 && a > 0) {
        let term = a as f64 * q_function((2.0 * rate * w as f64 * ebn0).sqrt());
        fer += term;
        ber += w as f64 / n * term;
    }
    Ok((fer, ber))
}
