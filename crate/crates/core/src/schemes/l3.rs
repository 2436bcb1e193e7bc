//! Common-to-all sublibrary: both receivers cache the same prefix of W_123
//! and the remainder is multicast uncoded.

use super::packet::{materialize_all, CacheContents, MulticastCodeword, PacketRef, Segment};
use crate::error::{Error, Result};
use crate::gray_wyner::DescriptionSet;
use crate::source_model::BitString;
use crate::subset::{Receiver, Subset};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct L3Scheme {
    pub budget: u64,
    pub rho0: u64,
}

impl L3Scheme {
    pub fn new(m3: u64, rho0: u64) -> Result<Self> {
        if m3 > rho0 {
            return Err(Error::OutOfRange {
                what: "L3 budget",
                value: m3.to_string(),
                lo: "0".into(),
                hi: rho0.to_string(),
            });
        }
        Ok(L3Scheme { budget: m3, rho0 })
    }

    fn cached(&self) -> PacketRef {
        let seg = if self.budget == self.rho0 {
            Segment::Whole
        } else {
            Segment::A
        };
        PacketRef::split(Subset::S123, seg, 0, self.budget as usize, 1, 1)
    }

    fn missing(&self) -> PacketRef {
        let seg = if self.budget == 0 {
            Segment::Whole
        } else {
            Segment::B
        };
        let len = (self.rho0 - self.budget) as usize;
        PacketRef::split(Subset::S123, seg, self.budget as usize, len, 1, 1)
    }

    pub fn place(&self, descs: &DescriptionSet) -> Result<CacheContents> {
        let units = [vec![vec![self.cached()]], vec![vec![self.cached()]]];
        let [a, b] = units;
        Ok(CacheContents::new([
            materialize_all(a, descs)?,
            materialize_all(b, descs)?,
        ]))
    }

    /// The uncached suffix, identical for every demand.
    pub fn deliver(&self, caches: &CacheContents, descs: &DescriptionSet) -> Result<MulticastCodeword> {
        super::check_budget("L3", caches, self.budget)?;
        Ok(MulticastCodeword::new(materialize_all(
            vec![vec![self.missing()]],
            descs,
        )?))
    }

    pub fn decode(
        &self,
        r: Receiver,
        caches: &CacheContents,
        codeword: &MulticastCodeword,
    ) -> Result<BitString> {
        let mut out = super::decode_at(r, caches, codeword, &[(Subset::S123, self.rho0 as usize)])?;
        Ok(out.remove(0))
    }
}

pub fn l3_place(m3: u64, descs: &DescriptionSet) -> Result<CacheContents> {
    L3Scheme::new(m3, descs.len_of(Subset::S123) as u64)?.place(descs)
}

pub fn l3_deliver(
    m3: u64,
    caches: &CacheContents,
    descs: &DescriptionSet,
) -> Result<MulticastCodeword> {
    L3Scheme::new(m3, descs.len_of(Subset::S123) as u64)?.deliver(caches, descs)
}
