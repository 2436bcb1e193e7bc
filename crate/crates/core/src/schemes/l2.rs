//! Two-request scheme for the common-to-two sublibrary {W12, W13, W23}.
//!
//! Each receiver wants two of the three descriptions. Corners sit at cache
//! sizes 0, 1/2, 3/2, 2 and 3 times the description length; the 1/2 corner
//! caches a single XOR of half-packets, which is what beats uncoded
//! placement at small memory.

use super::packet::{materialize_all, CacheContents, MulticastCodeword, PacketRef};
use super::sharing::{self, SegmentView, SharingPlan};
use crate::error::Result;
use crate::gray_wyner::{DescriptionSet, L2Pattern};
use crate::quantity::Bits;
use crate::source_model::BitString;
use crate::subset::{Receiver, Subset};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum L2Corner {
    Zero,
    /// Coded placement, M = rho'/2.
    Half,
    /// Uncoded halves, M = 3 rho'/2.
    ThreeHalves,
    /// Uncoded thirds, M = 2 rho'.
    Two,
    Full,
}

impl L2Corner {
    pub const ALL: [L2Corner; 5] = [
        L2Corner::Zero,
        L2Corner::Half,
        L2Corner::ThreeHalves,
        L2Corner::Two,
        L2Corner::Full,
    ];

    /// Cache size as a multiple of rho'.
    pub fn memory(self) -> Bits {
        match self {
            L2Corner::Zero => Bits::new(0, 1),
            L2Corner::Half => Bits::new(1, 2),
            L2Corner::ThreeHalves => Bits::new(3, 2),
            L2Corner::Two => Bits::new(2, 1),
            L2Corner::Full => Bits::new(3, 1),
        }
    }

    /// Peak delivery as a multiple of rho'.
    pub fn rate(self) -> Bits {
        match self {
            L2Corner::Zero => Bits::new(3, 1),
            L2Corner::Half => Bits::new(2, 1),
            L2Corner::ThreeHalves => Bits::new(1, 1),
            L2Corner::Two => Bits::new(2, 3),
            L2Corner::Full => Bits::new(0, 1),
        }
    }

    fn table() -> Vec<(L2Corner, Bits)> {
        Self::ALL.iter().map(|c| (*c, c.memory())).collect()
    }
}

const MEMBERS: [Subset; 3] = [Subset::S12, Subset::S13, Subset::S23];

/// Halves and thirds of every segment must be whole packets.
const PACKET_UNIT: u64 = 6;

fn pk(v: &SegmentView<L2Corner>, s: Subset, denom: u32, index: u32) -> PacketRef {
    PacketRef::split(s, v.segment, v.start, v.len, denom, index)
}

fn corner_place(v: &SegmentView<L2Corner>) -> [Vec<Vec<PacketRef>>; 2] {
    match v.corner {
        L2Corner::Zero => [vec![], vec![]],
        L2Corner::Half => [1, 2].map(|i| vec![MEMBERS.iter().map(|s| pk(v, *s, 2, i)).collect()]),
        L2Corner::ThreeHalves => [1, 2].map(|i| MEMBERS.iter().map(|s| vec![pk(v, *s, 2, i)]).collect()),
        L2Corner::Two => [[1, 2], [2, 3]].map(|idx| {
            MEMBERS
                .iter()
                .flat_map(|s| idx.map(|i| vec![pk(v, *s, 3, i)]))
                .collect()
        }),
        L2Corner::Full => [(); 2].map(|_| MEMBERS.iter().map(|s| vec![pk(v, *s, 1, 1)]).collect()),
    }
}

fn corner_deliver(v: &SegmentView<L2Corner>, pattern: L2Pattern) -> Vec<Vec<PacketRef>> {
    match pattern {
        L2Pattern::Distinct {
            common: c,
            only_r1: a,
            only_r2: b,
        } => match v.corner {
            L2Corner::Zero => [c, a, b].iter().map(|s| vec![pk(v, *s, 1, 1)]).collect(),
            L2Corner::Half => vec![
                vec![pk(v, c, 2, 1)],
                vec![pk(v, c, 2, 2)],
                vec![pk(v, a, 2, 2)],
                vec![pk(v, b, 2, 1)],
            ],
            L2Corner::ThreeHalves => vec![
                vec![pk(v, c, 2, 2), pk(v, c, 2, 1)],
                vec![pk(v, a, 2, 2), pk(v, b, 2, 1)],
            ],
            L2Corner::Two => vec![
                vec![pk(v, c, 3, 3), pk(v, c, 3, 1)],
                vec![pk(v, a, 3, 3), pk(v, b, 3, 1)],
            ],
            L2Corner::Full => vec![],
        },
        L2Pattern::Equal { wanted: [x, y] } => match v.corner {
            L2Corner::Zero => vec![vec![pk(v, x, 1, 1)], vec![pk(v, y, 1, 1)]],
            L2Corner::Half => [x, y]
                .iter()
                .flat_map(|s| [1, 2].map(|i| vec![pk(v, *s, 2, i)]))
                .collect(),
            L2Corner::ThreeHalves => [x, y]
                .iter()
                .map(|s| vec![pk(v, *s, 2, 2), pk(v, *s, 2, 1)])
                .collect(),
            L2Corner::Two => [x, y]
                .iter()
                .map(|s| vec![pk(v, *s, 3, 3), pk(v, *s, 3, 1)])
                .collect(),
            L2Corner::Full => vec![],
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L2Scheme {
    pub budget: u64,
    pub rho_pair: u64,
    pub plan: SharingPlan<L2Corner>,
}

impl L2Scheme {
    /// Plans budget `m2` on the `1/q` memory-sharing grid.
    pub fn new(m2: u64, rho_pair: u64, q: u64) -> Result<Self> {
        let plan = sharing::plan(
            "L2 budget",
            &L2Corner::table(),
            m2,
            rho_pair,
            q,
            PACKET_UNIT,
        )?;
        Ok(L2Scheme {
            budget: m2,
            rho_pair,
            plan,
        })
    }

    /// All budgets this scheme accepts for the given `q`.
    pub fn representable(rho_pair: u64, q: u64) -> Vec<u64> {
        sharing::representable(&L2Corner::table(), rho_pair, q)
    }

    fn segments(&self) -> Vec<SegmentView<L2Corner>> {
        self.plan.segments(self.rho_pair as usize)
    }

    pub fn place(&self, descs: &DescriptionSet) -> Result<CacheContents> {
        let mut units: [Vec<Vec<PacketRef>>; 2] = Default::default();
        for v in self.segments() {
            for (i, u) in corner_place(&v).into_iter().enumerate() {
                units[i].extend(u);
            }
        }
        let [a, b] = units;
        Ok(CacheContents::new([
            materialize_all(a, descs)?,
            materialize_all(b, descs)?,
        ]))
    }

    pub fn deliver(
        &self,
        pattern: L2Pattern,
        caches: &CacheContents,
        descs: &DescriptionSet,
    ) -> Result<MulticastCodeword> {
        super::check_budget("L2", caches, self.budget)?;
        let units = self
            .segments()
            .iter()
            .flat_map(|v| corner_deliver(v, pattern))
            .collect();
        Ok(MulticastCodeword::new(materialize_all(units, descs)?))
    }

    /// Recovers the two descriptions `r` wants, in the order of `pattern.wanted_by(r)`.
    pub fn decode(
        &self,
        r: Receiver,
        caches: &CacheContents,
        codeword: &MulticastCodeword,
        pattern: L2Pattern,
    ) -> Result<[BitString; 2]> {
        let len = self.rho_pair as usize;
        let wanted = pattern.wanted_by(r).map(|s| (s, len));
        let mut out = super::decode_at(r, caches, codeword, &wanted)?;
        let second = out.pop().expect("two descriptions");
        let first = out.pop().expect("two descriptions");
        Ok([first, second])
    }
}

pub fn l2_place(m2: u64, descs: &DescriptionSet, q: u64) -> Result<CacheContents> {
    L2Scheme::new(m2, descs.len_of(Subset::S12) as u64, q)?.place(descs)
}

pub fn l2_deliver(
    m2: u64,
    pattern: L2Pattern,
    caches: &CacheContents,
    descs: &DescriptionSet,
    q: u64,
) -> Result<MulticastCodeword> {
    L2Scheme::new(m2, descs.len_of(Subset::S12) as u64, q)?.deliver(pattern, caches, descs)
}

pub fn l2_decode(
    m2: u64,
    r: Receiver,
    caches: &CacheContents,
    codeword: &MulticastCodeword,
    pattern: L2Pattern,
    q: u64,
) -> Result<[BitString; 2]> {
    // Without any L2 unit in view the descriptions must be empty.
    let rho_pair = infer_len(caches, codeword);
    L2Scheme::new(m2, rho_pair as u64, q)?.decode(r, caches, codeword, pattern)
}

/// Description length implied by the furthest L2 packet seen.
fn infer_len(caches: &CacheContents, codeword: &MulticastCodeword) -> usize {
    caches
        .units
        .iter()
        .flatten()
        .chain(&codeword.units)
        .flat_map(|u| u.composition.iter())
        .filter(|p| p.subset.cardinality() == 2)
        .map(|p| p.end())
        .max()
        .unwrap_or(0)
}
