//! Private sublibrary {W1, W2, W3}: the exact two-user single-request scheme
//! with uncoded placement, corners at 0, 3/2 and 3 times the description length.

use super::packet::{materialize_all, CacheContents, MulticastCodeword, PacketRef};
use super::sharing::{self, SegmentView, SharingPlan};
use crate::error::Result;
use crate::gray_wyner::DescriptionSet;
use crate::quantity::Bits;
use crate::source_model::BitString;
use crate::subset::{Demand, Receiver, Subset};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum L1Corner {
    Zero,
    ThreeHalves,
    Full,
}

impl L1Corner {
    pub const ALL: [L1Corner; 3] = [L1Corner::Zero, L1Corner::ThreeHalves, L1Corner::Full];

    pub fn memory(self) -> Bits {
        match self {
            L1Corner::Zero => Bits::new(0, 1),
            L1Corner::ThreeHalves => Bits::new(3, 2),
            L1Corner::Full => Bits::new(3, 1),
        }
    }

    pub fn rate(self) -> Bits {
        match self {
            L1Corner::Zero => Bits::new(2, 1),
            L1Corner::ThreeHalves => Bits::new(1, 2),
            L1Corner::Full => Bits::new(0, 1),
        }
    }

    fn table() -> Vec<(L1Corner, Bits)> {
        Self::ALL.iter().map(|c| (*c, c.memory())).collect()
    }
}

const MEMBERS: [Subset; 3] = [Subset::S1, Subset::S2, Subset::S3];
const PACKET_UNIT: u64 = 2;

fn pk(v: &SegmentView<L1Corner>, s: Subset, denom: u32, index: u32) -> PacketRef {
    PacketRef::split(s, v.segment, v.start, v.len, denom, index)
}

fn corner_place(v: &SegmentView<L1Corner>) -> [Vec<Vec<PacketRef>>; 2] {
    match v.corner {
        L1Corner::Zero => [vec![], vec![]],
        L1Corner::ThreeHalves => [1, 2].map(|i| MEMBERS.iter().map(|s| vec![pk(v, *s, 2, i)]).collect()),
        L1Corner::Full => [(); 2].map(|_| MEMBERS.iter().map(|s| vec![pk(v, *s, 1, 1)]).collect()),
    }
}

fn corner_deliver(v: &SegmentView<L1Corner>, demand: Demand) -> Vec<Vec<PacketRef>> {
    let w1 = Subset::single(demand.d1);
    let w2 = Subset::single(demand.d2);
    match v.corner {
        L1Corner::Zero if w1 == w2 => vec![vec![pk(v, w1, 1, 1)]],
        L1Corner::Zero => vec![vec![pk(v, w1, 1, 1)], vec![pk(v, w2, 1, 1)]],
        L1Corner::ThreeHalves => vec![vec![pk(v, w1, 2, 2), pk(v, w2, 2, 1)]],
        L1Corner::Full => vec![],
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L1Scheme {
    pub budget: u64,
    pub rho_priv: u64,
    pub plan: SharingPlan<L1Corner>,
}

impl L1Scheme {
    pub fn new(m1: u64, rho_priv: u64, q: u64) -> Result<Self> {
        let plan = sharing::plan(
            "L1 budget",
            &L1Corner::table(),
            m1,
            rho_priv,
            q,
            PACKET_UNIT,
        )?;
        Ok(L1Scheme {
            budget: m1,
            rho_priv,
            plan,
        })
    }

    pub fn representable(rho_priv: u64, q: u64) -> Vec<u64> {
        sharing::representable(&L1Corner::table(), rho_priv, q)
    }

    fn segments(&self) -> Vec<SegmentView<L1Corner>> {
        self.plan.segments(self.rho_priv as usize)
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
        demand: Demand,
        caches: &CacheContents,
        descs: &DescriptionSet,
    ) -> Result<MulticastCodeword> {
        super::check_budget("L1", caches, self.budget)?;
        let units = self
            .segments()
            .iter()
            .flat_map(|v| corner_deliver(v, demand))
            .collect();
        Ok(MulticastCodeword::new(materialize_all(units, descs)?))
    }

    pub fn decode(
        &self,
        r: Receiver,
        caches: &CacheContents,
        codeword: &MulticastCodeword,
        demand: Demand,
    ) -> Result<BitString> {
        let wanted = [(Subset::single(demand.of(r)), self.rho_priv as usize)];
        let mut out = super::decode_at(r, caches, codeword, &wanted)?;
        Ok(out.remove(0))
    }
}

pub fn l1_place(m1: u64, descs: &DescriptionSet, q: u64) -> Result<CacheContents> {
    L1Scheme::new(m1, descs.len_of(Subset::S1) as u64, q)?.place(descs)
}

pub fn l1_deliver(
    m1: u64,
    demand: Demand,
    caches: &CacheContents,
    descs: &DescriptionSet,
    q: u64,
) -> Result<MulticastCodeword> {
    L1Scheme::new(m1, descs.len_of(Subset::S1) as u64, q)?.deliver(demand, caches, descs)
}

pub fn l1_decode(
    m1: u64,
    r: Receiver,
    caches: &CacheContents,
    codeword: &MulticastCodeword,
    demand: Demand,
    rho_priv: u64,
    q: u64,
) -> Result<BitString> {
    L1Scheme::new(m1, rho_priv, q)?.decode(r, caches, codeword, demand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gray_wyner::gw_encode;
    use crate::source_model::{make_structured_library, SourceSpec};

    fn descs() -> DescriptionSet {
        gw_encode(&make_structured_library(SourceSpec::new(0, 0, 1200, 4).unwrap(), 5).unwrap())
    }

    fn peak(m1: u64) -> u64 {
        let d = descs();
        let s = L1Scheme::new(m1, 1200, 4).unwrap();
        let caches = s.place(&d).unwrap();
        Demand::all()
            .map(|dm| {
                let y = s.deliver(dm, &caches, &d).unwrap();
                for r in Receiver::BOTH {
                    let got = s.decode(r, &caches, &y, dm).unwrap();
                    assert_eq!(got, d.get(Subset::single(dm.of(r))));
                }
                y.total_bits
            })
            .max()
            .unwrap()
    }

    #[test]
    fn corner_peaks() {
        assert_eq!(peak(0), 2400);
        assert_eq!(peak(1800), 600);
        assert_eq!(peak(3600), 0);
        assert_eq!(peak(900), 1500);
    }

    #[test]
    fn same_file_uncached_sends_once() {
        let d = descs();
        let s = L1Scheme::new(0, 1200, 4).unwrap();
        let caches = s.place(&d).unwrap();
        let y = s.deliver(Demand::new(2, 2).unwrap(), &caches, &d).unwrap();
        assert_eq!(y.total_bits, 1200);
    }

    #[test]
    fn half_corner_cache_sizes() {
        let caches = l1_place(1800, &descs(), 4).unwrap();
        assert_eq!(caches.used_bits, [1800, 1800]);
        assert_eq!(caches.units[0].len(), 3);
        let y = l1_deliver(1800, Demand::new(3, 3).unwrap(), &caches, &descs(), 4).unwrap();
        assert_eq!(y.labels(), ["W3(1)+W3(2)"]);
    }
}
