use std::fmt;

use bitvec::prelude::*;

use crate::error::{Error, Result};
use crate::gray_wyner::DescriptionSet;
use crate::source_model::BitString;
use crate::subset::{Receiver, Subset};

/// Which memory-sharing share of a description a packet belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Segment {
    Whole,
    /// Leading share (served by the lower corner, or the LFU-cached part of W_123).
    A,
    /// Trailing share.
    B,
}

impl Segment {
    fn tag(self) -> &'static str {
        match self {
            Segment::Whole => "",
            Segment::A => "a",
            Segment::B => "b",
        }
    }
}

/// Packet `index` of `denom` equal packets of one segment of W_subset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PacketRef {
    pub subset: Subset,
    pub segment: Segment,
    pub index: u32,
    pub denom: u32,
    /// Bit offset within the description.
    pub start: usize,
    pub len: usize,
}

impl PacketRef {
    /// Packet `index` (1-based) of the segment `[seg_start, seg_start + seg_len)`
    /// split into `denom` equal parts.
    pub fn split(
        subset: Subset,
        segment: Segment,
        seg_start: usize,
        seg_len: usize,
        denom: u32,
        index: u32,
    ) -> Self {
        assert!(denom > 0 && (1..=denom).contains(&index));
        assert_eq!(seg_len % denom as usize, 0, "segment not divisible into packets");
        let len = seg_len / denom as usize;
        PacketRef {
            subset,
            segment,
            index,
            denom,
            start: seg_start + (index as usize - 1) * len,
            len,
        }
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

impl fmt::Display for PacketRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{}{}", self.subset, self.segment.tag())?;
        if self.denom > 1 {
            write!(f, "({})", self.index)?;
        }
        Ok(())
    }
}

/// XOR of equal-length packets together with its payload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheUnit {
    pub composition: Vec<PacketRef>,
    pub payload: BitString,
}

impl CacheUnit {
    /// Validates shape and sorts the composition; the payload is taken as given.
    pub fn new(mut composition: Vec<PacketRef>, payload: BitString) -> Result<Self> {
        if composition.is_empty() {
            return Err(Error::MalformedUnit("empty composition".into()));
        }
        composition.sort();
        if composition.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedUnit("packet repeated in composition".into()));
        }
        if let Some(p) = composition.iter().find(|p| p.len != payload.len()) {
            return Err(Error::MalformedUnit(format!(
                "{p} has {} bits, payload has {}",
                p.len,
                payload.len()
            )));
        }
        Ok(CacheUnit {
            composition,
            payload,
        })
    }

    /// Computes the payload from the descriptions.
    pub fn materialize(composition: Vec<PacketRef>, descs: &DescriptionSet) -> Result<Self> {
        let len = composition
            .first()
            .map(|p| p.len)
            .ok_or_else(|| Error::MalformedUnit("empty composition".into()))?;
        let mut payload = bitvec![u8, Msb0; 0; len];
        for p in &composition {
            let w = descs
                .descriptions
                .get(&p.subset)
                .ok_or_else(|| Error::MalformedUnit(format!("no description W{}", p.subset)))?;
            if p.end() > w.len() {
                return Err(Error::MalformedUnit(format!(
                    "{p} spans [{}, {}) beyond W{} of {} bits",
                    p.start,
                    p.end(),
                    p.subset,
                    w.len()
                )));
            }
            if p.len != len {
                return Err(Error::MalformedUnit(format!("{p} length differs within unit")));
            }
            payload ^= &w[p.start..p.end()];
        }
        CacheUnit::new(composition, payload)
    }

    pub fn bits(&self) -> u64 {
        self.payload.len() as u64
    }

    pub fn label(&self) -> String {
        self.composition
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl fmt::Display for CacheUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Turns symbolic units into materialized ones, dropping zero-length units.
pub(crate) fn materialize_all(
    units: Vec<Vec<PacketRef>>,
    descs: &DescriptionSet,
) -> Result<Vec<CacheUnit>> {
    units
        .into_iter()
        .filter(|u| u.first().is_some_and(|p| p.len > 0))
        .map(|u| CacheUnit::materialize(u, descs))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CacheContents {
    pub units: [Vec<CacheUnit>; 2],
    pub used_bits: [u64; 2],
}

impl CacheContents {
    pub fn new(units: [Vec<CacheUnit>; 2]) -> Self {
        let used_bits = [0, 1].map(|i| units[i].iter().map(CacheUnit::bits).sum());
        CacheContents { units, used_bits }
    }

    pub fn of(&self, r: Receiver) -> &[CacheUnit] {
        &self.units[r.index()]
    }

    pub fn used(&self, r: Receiver) -> u64 {
        self.used_bits[r.index()]
    }

    /// Appends another sublibrary's contents.
    pub fn extend(&mut self, other: CacheContents) {
        for (i, units) in other.units.into_iter().enumerate() {
            self.units[i].extend(units);
            self.used_bits[i] += other.used_bits[i];
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MulticastCodeword {
    pub units: Vec<CacheUnit>,
    pub total_bits: u64,
}

impl MulticastCodeword {
    pub fn new(units: Vec<CacheUnit>) -> Self {
        let total_bits = units.iter().map(CacheUnit::bits).sum();
        MulticastCodeword { units, total_bits }
    }

    pub fn concat(parts: impl IntoIterator<Item = MulticastCodeword>) -> Self {
        MulticastCodeword::new(parts.into_iter().flat_map(|c| c.units).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.units.iter().map(CacheUnit::label).collect()
    }
}
