//! Library sources: structured sources built from independent random
//! components, and joint-pmf sources used only for entropy evaluation.

use std::collections::BTreeMap;

use bitvec::prelude::*;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantity::{bits, Bits, Quantity};
use crate::subset::{FileId, Subset};

pub type BitString = BitVec<u8, Msb0>;

/// Generator used to fill components; recorded in simulation output.
pub const PRNG_ID: &str = "chacha8 (rand_chacha 0.3, seed_from_u64)";

pub const DEFAULT_GRANULARITY: u64 = 4;

fn default_granularity() -> u64 {
    DEFAULT_GRANULARITY
}

/// Bit lengths of the seven independent components of a structured library.
///
/// `cp` is the length of each of the three pairwise components and `cv` the
/// length of each private component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub c0: u64,
    pub cp: u64,
    pub cv: u64,
    #[serde(default = "default_granularity")]
    pub granularity_q: u64,
}

impl SourceSpec {
    pub fn new(c0: u64, cp: u64, cv: u64, granularity_q: u64) -> Result<Self> {
        let spec = SourceSpec {
            c0,
            cp,
            cv,
            granularity_q,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let q = self.granularity_q;
        if q == 0 {
            return Err(Error::InvalidSpec {
                field: "granularity_q",
                reason: "must be positive".into(),
            });
        }
        let unit = q.checked_mul(6).ok_or_else(|| Error::InvalidSpec {
            field: "granularity_q",
            reason: "too large".into(),
        })?;
        for (field, v) in [("cp", self.cp), ("cv", self.cv)] {
            if v % unit != 0 {
                return Err(Error::InvalidSpec {
                    field,
                    reason: format!("= {v} is not divisible by 6*q = {unit}"),
                });
            }
        }
        if !self.c0.is_multiple_of(q) {
            return Err(Error::InvalidSpec {
                field: "c0",
                reason: format!("= {} is not divisible by q = {q}", self.c0),
            });
        }
        if self.c0 == 0 && self.cp == 0 && self.cv == 0 {
            return Err(Error::InvalidSpec {
                field: "c0",
                reason: "c0, cp and cv are all zero".into(),
            });
        }
        let total = self
            .c0
            .checked_add(self.cp.saturating_mul(3))
            .and_then(|s| s.checked_add(self.cv.checked_mul(3)?))
            .unwrap_or(u64::MAX);
        if total > 1 << 40 {
            return Err(Error::InvalidSpec {
                field: "c0",
                reason: "library larger than 2^40 bits".into(),
            });
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: SourceSpec =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("source spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Length of the component shared by exactly the files in `s`.
    pub fn component_len(&self, s: Subset) -> u64 {
        match s.cardinality() {
            3 => self.c0,
            2 => self.cp,
            _ => self.cv,
        }
    }

    pub fn file_len(&self) -> u64 {
        self.c0 + 2 * self.cp + self.cv
    }
}

/// The four components making up file `i`, in assembly order.
pub fn file_components(i: FileId) -> [Subset; 4] {
    let [j, k] = i.others();
    [
        Subset::S123,
        Subset::pair(i, j),
        Subset::pair(i, k),
        Subset::single(i),
    ]
}

/// A structured library: independent components and the files assembled from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Library {
    pub spec: SourceSpec,
    pub components: BTreeMap<Subset, BitString>,
    pub files: [BitString; 3],
    pub seed: u64,
}

impl Library {
    pub fn file(&self, i: FileId) -> &BitSlice<u8, Msb0> {
        &self.files[usize::from(i.get() - 1)]
    }

    pub fn component(&self, s: Subset) -> &BitSlice<u8, Msb0> {
        &self.components[&s]
    }

    /// Splits file `i` back into its four components at the canonical offsets.
    pub fn slice_file(&self, i: FileId) -> Vec<(Subset, &BitSlice<u8, Msb0>)> {
        let file = self.file(i);
        let mut start = 0usize;
        file_components(i)
            .into_iter()
            .map(|s| {
                let len = self.spec.component_len(s) as usize;
                let part = &file[start..start + len];
                start += len;
                (s, part)
            })
            .collect()
    }
}

pub fn make_structured_library(spec: SourceSpec, seed: u64) -> Result<Library> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut components = BTreeMap::new();
    for s in Subset::CANONICAL {
        let len = spec.component_len(s) as usize;
        let mut bytes = vec![0u8; len.div_ceil(8)];
        rng.fill_bytes(&mut bytes);
        let mut v = BitString::from_vec(bytes);
        v.truncate(len);
        components.insert(s, v);
    }
    let files = FileId::ALL.map(|i| {
        let mut f = BitString::with_capacity(spec.file_len() as usize);
        for s in file_components(i) {
            f.extend_from_bitslice(&components[&s]);
        }
        f
    });
    Ok(Library {
        spec,
        components,
        files,
        seed,
    })
}

/// Entropy quantities consumed by the lower bound and the gap certificates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyProfile<T = Bits> {
    /// max_i H(X_i)
    pub h_single: T,
    /// max_{i,j} H(X_i, X_j)
    pub h_pair: T,
    /// H(X1, X2, X3)
    pub h_triple: T,
    /// H(X2, X3 | X1)
    pub h_pair_given_one: T,
    /// All single entropies equal and all pair entropies equal.
    pub symmetric: bool,
}

pub fn entropy_profile_structured(spec: &SourceSpec) -> EntropyProfile<Bits> {
    let (c0, cp, cv) = (spec.c0 as i64, spec.cp as i64, spec.cv as i64);
    EntropyProfile {
        h_single: bits(c0 + 2 * cp + cv),
        h_pair: bits(c0 + 3 * cp + 2 * cv),
        h_triple: bits(c0 + 3 * cp + 3 * cv),
        h_pair_given_one: bits(cp + 2 * cv),
        symmetric: true,
    }
}

/// A joint pmf p(x1, x2, x3) stored row-major with dimensions (n1, n2, n3).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmfSource {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub p: Vec<f64>,
}

const PMF_TOLERANCE: f64 = 1e-12;

impl PmfSource {
    pub fn new(n1: usize, n2: usize, n3: usize, p: Vec<f64>) -> Result<Self> {
        let src = PmfSource { n1, n2, n3, p };
        src.validate()?;
        Ok(src)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let src: PmfSource =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("pmf source: {e}")))?;
        src.validate()?;
        Ok(src)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n1 == 0 || self.n2 == 0 || self.n3 == 0 {
            return Err(Error::InvalidPmf("alphabet sizes must be positive".into()));
        }
        let cells = self
            .n1
            .checked_mul(self.n2)
            .and_then(|x| x.checked_mul(self.n3))
            .ok_or_else(|| Error::InvalidPmf("alphabet product overflows".into()))?;
        if cells != self.p.len() {
            return Err(Error::InvalidPmf(format!(
                "table has {} entries, dimensions require {cells}",
                self.p.len()
            )));
        }
        if let Some(bad) = self.p.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidPmf(format!("entry {bad} is not a probability")));
        }
        let total: f64 = self.p.iter().sum();
        if (total - 1.0).abs() > PMF_TOLERANCE {
            return Err(Error::InvalidPmf(format!("entries sum to {total}, not 1")));
        }
        Ok(())
    }

    fn at(&self, a: usize, b: usize, c: usize) -> f64 {
        self.p[(a * self.n2 + b) * self.n3 + c]
    }
}

fn shannon(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs
        .into_iter()
        .filter(|p| *p > 0.0)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

pub fn entropy_profile_pmf(src: &PmfSource) -> Result<EntropyProfile<f64>> {
    src.validate()?;
    let (n1, n2, n3) = (src.n1, src.n2, src.n3);
    let mut m1 = vec![0.0; n1];
    let mut m2 = vec![0.0; n2];
    let mut m3 = vec![0.0; n3];
    let mut p12 = vec![0.0; n1 * n2];
    let mut p13 = vec![0.0; n1 * n3];
    let mut p23 = vec![0.0; n2 * n3];
    for a in 0..n1 {
        for b in 0..n2 {
            for c in 0..n3 {
                let p = src.at(a, b, c);
                m1[a] += p;
                m2[b] += p;
                m3[c] += p;
                p12[a * n2 + b] += p;
                p13[a * n3 + c] += p;
                p23[b * n3 + c] += p;
            }
        }
    }
    let singles = [shannon(m1), shannon(m2), shannon(m3)];
    let pairs = [shannon(p12), shannon(p13), shannon(p23)];
    let h_triple = shannon(src.p.iter().copied());
    let fmax = |xs: &[f64]| xs.iter().copied().fold(f64::MIN, f64::max);
    let all_eq = |xs: &[f64]| xs.iter().all(|x| x.approx_eq(xs[0]));
    Ok(EntropyProfile {
        h_single: fmax(&singles),
        h_pair: fmax(&pairs),
        h_triple,
        h_pair_given_one: (h_triple - singles[0]).max(0.0),
        symmetric: all_eq(&singles) && all_eq(&pairs),
    })
}
