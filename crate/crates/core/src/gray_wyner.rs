//! The seven Gray-Wyner descriptions, symmetric rate tuples, sublibraries and
//! per-demand request sets.

use std::collections::BTreeMap;
use std::fmt;

use bitvec::prelude::*;

use crate::error::{Error, Result};
use crate::quantity::{to_u64, Bits, Quantity};
use crate::source_model::{file_components, BitString, Library, SourceSpec};
use crate::subset::{Demand, FileId, Receiver, Subset};

/// Symmetric rate tuple: `rho0` for W_123, `rho_pair` for each W_ij and
/// `rho_priv` for each W_i.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateTuple<T = Bits> {
    pub rho0: T,
    pub rho_pair: T,
    pub rho_priv: T,
}

impl<T: Quantity> RateTuple<T> {
    pub fn new(rho0: T, rho_pair: T, rho_priv: T) -> Result<Self> {
        let zero = T::zero();
        if rho0 < zero || rho_pair < zero || rho_priv < zero {
            return Err(Error::InvalidTuple(format!(
                "rates must be non-negative, got ({rho0:?}, {rho_pair:?}, {rho_priv:?})"
            )));
        }
        Ok(RateTuple {
            rho0,
            rho_pair,
            rho_priv,
        })
    }

    pub fn sum_rate(&self) -> T {
        let three = T::int(3);
        self.rho0 + three * self.rho_pair + three * self.rho_priv
    }

    pub fn rate_of(&self, s: Subset) -> T {
        match s.cardinality() {
            3 => self.rho0,
            2 => self.rho_pair,
            _ => self.rho_priv,
        }
    }
}

impl<T: Quantity> fmt::Display for RateTuple<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            self.rho0.render(),
            self.rho_pair.render(),
            self.rho_priv.render()
        )
    }
}

/// Canonical operating point of a structured source: its component lengths.
pub fn generating_tuple(spec: &SourceSpec) -> RateTuple {
    RateTuple {
        rho0: Bits::from_integer(spec.c0 as i64),
        rho_pair: Bits::from_integer(spec.cp as i64),
        rho_priv: Bits::from_integer(spec.cv as i64),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DescriptionSet {
    pub descriptions: BTreeMap<Subset, BitString>,
    pub tuple: RateTuple,
}

impl DescriptionSet {
    pub fn get(&self, s: Subset) -> &BitSlice<u8, Msb0> {
        &self.descriptions[&s]
    }

    pub fn len_of(&self, s: Subset) -> usize {
        self.descriptions[&s].len()
    }
}

/// Gray-Wyner encoder for structured libraries: each description is the
/// component shared by exactly its subset of files.
pub fn gw_encode(library: &Library) -> DescriptionSet {
    DescriptionSet {
        descriptions: library.components.clone(),
        tuple: generating_tuple(&library.spec),
    }
}

/// Reassembles X_file from the four descriptions in its request set.
///
/// `tuple` fixes the expected description lengths.
pub fn gw_decode(
    file: FileId,
    tuple: &RateTuple,
    descriptions: &[(Subset, &BitSlice<u8, Msb0>)],
) -> Result<BitString> {
    let needed = file_components(file);
    let fail = |subset, reason: String| Error::GwDecode {
        file: file.get(),
        subset,
        reason,
    };
    if let Some((s, _)) = descriptions.iter().find(|(s, _)| !needed.contains(s)) {
        return Err(fail(*s, "not in the request set of this file".into()));
    }
    let mut out = BitString::new();
    for s in needed {
        let mut matching = descriptions.iter().filter(|(t, _)| *t == s);
        let (_, bits) = matching
            .next()
            .ok_or_else(|| fail(s, "description missing".into()))?;
        if matching.next().is_some() {
            return Err(fail(s, "description supplied twice".into()));
        }
        let expected = to_u64(tuple.rate_of(s))
            .ok_or_else(|| fail(s, "tuple rate is not a whole number of bits".into()))?;
        if bits.len() as u64 != expected {
            return Err(fail(
                s,
                format!("length {} does not match rate {expected}", bits.len()),
            ));
        }
        out.extend_from_bitslice(bits);
    }
    Ok(out)
}

/// How the two receivers' L2 wants overlap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum L2Pattern {
    /// d1 != d2: `common` is wanted by both, `only_r1` and `only_r2` by one receiver each.
    Distinct {
        common: Subset,
        only_r1: Subset,
        only_r2: Subset,
    },
    /// d1 == d2: both receivers want the same two descriptions.
    Equal { wanted: [Subset; 2] },
}

impl L2Pattern {
    pub fn wanted_by(&self, r: Receiver) -> [Subset; 2] {
        match *self {
            L2Pattern::Distinct {
                common,
                only_r1,
                only_r2,
            } => match r {
                Receiver::R1 => [common, only_r1],
                Receiver::R2 => [common, only_r2],
            },
            L2Pattern::Equal { wanted } => wanted,
        }
    }
}

impl fmt::Display for L2Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            L2Pattern::Distinct {
                common,
                only_r1,
                only_r2,
            } => write!(
                f,
                "DISTINCT common=W{common} r1-only=W{only_r1} r2-only=W{only_r2}"
            ),
            L2Pattern::Equal { wanted } => write!(f, "EQUAL on W{}, W{}", wanted[0], wanted[1]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RequestSets {
    pub per_receiver: [[Subset; 4]; 2],
    pub l2_pattern: L2Pattern,
}

impl RequestSets {
    pub fn of(&self, r: Receiver) -> [Subset; 4] {
        self.per_receiver[r.index()]
    }
}

pub fn request_sets(demand: Demand) -> RequestSets {
    let per_receiver = [file_components(demand.d1), file_components(demand.d2)];
    let l2_pattern = if demand.d1 == demand.d2 {
        let [_, a, b, _] = per_receiver[0];
        L2Pattern::Equal { wanted: [a, b] }
    } else {
        let common = Subset::pair(demand.d1, demand.d2);
        let other = |r: usize| {
            per_receiver[r][1..3]
                .iter()
                .copied()
                .find(|s| *s != common)
                .expect("two pair descriptions per file")
        };
        L2Pattern::Distinct {
            common,
            only_r1: other(0),
            only_r2: other(1),
        }
    };
    RequestSets {
        per_receiver,
        l2_pattern,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sublibrary {
    L3,
    L2,
    L1,
}

impl Sublibrary {
    pub fn members(self) -> &'static [Subset] {
        match self {
            Sublibrary::L3 => &[Subset::S123],
            Sublibrary::L2 => &[Subset::S12, Subset::S13, Subset::S23],
            Sublibrary::L1 => &[Subset::S1, Subset::S2, Subset::S3],
        }
    }

    pub fn of(s: Subset) -> Self {
        match s.cardinality() {
            3 => Sublibrary::L3,
            2 => Sublibrary::L2,
            _ => Sublibrary::L1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sublibrary::L3 => "L3",
            Sublibrary::L2 => "L2",
            Sublibrary::L1 => "L1",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantity::{bits, Bits};
    use crate::source_model::{entropy_profile_structured, make_structured_library};

    fn lib(c0: u64, cp: u64, cv: u64, seed: u64) -> Library {
        make_structured_library(SourceSpec::new(c0, cp, cv, 4).unwrap(), seed).unwrap()
    }

    #[test]
    fn encode_common_only() {
        let l = lib(24, 0, 0, 5);
        let d = gw_encode(&l);
        assert_eq!(d.get(Subset::S123), l.component(Subset::S123));
        assert_eq!(d.len_of(Subset::S123), 24);
        for s in &Subset::CANONICAL[1..] {
            assert!(d.get(*s).is_empty());
        }
    }

    #[test]
    fn encode_unit_tuple_sizes() {
        let d = gw_encode(&lib(1200, 1200, 1200, 1));
        for s in Subset::CANONICAL {
            assert_eq!(d.len_of(s), 1200);
        }
        assert_eq!(d.tuple, RateTuple::new(bits(1200), bits(1200), bits(1200)).unwrap());
    }

    #[test]
    fn decode_round_trip() {
        for (c0, cp, cv) in [(1200, 1200, 1200), (0, 0, 24), (24, 48, 96), (24, 0, 0)] {
            let l = lib(c0, cp, cv, 11);
            let d = gw_encode(&l);
            for i in FileId::ALL {
                let parts: Vec<_> = file_components(i).iter().map(|s| (*s, d.get(*s))).collect();
                assert_eq!(gw_decode(i, &d.tuple, &parts).unwrap(), l.file(i));
            }
        }
    }

    #[test]
    fn decode_rejects_wrong_subset() {
        let l = lib(24, 48, 96, 2);
        let d = gw_encode(&l);
        let i = FileId::new(2).unwrap();
        let parts = [
            (Subset::S123, d.get(Subset::S123)),
            (Subset::S23, d.get(Subset::S23)),
            (Subset::S23, d.get(Subset::S23)),
            (Subset::S2, d.get(Subset::S2)),
        ];
        let err = gw_decode(i, &d.tuple, &parts).unwrap_err();
        assert!(matches!(err, Error::GwDecode { subset: Subset::S12, .. }), "{err}");

        let parts = [
            (Subset::S123, d.get(Subset::S123)),
            (Subset::S13, d.get(Subset::S13)),
        ];
        let err = gw_decode(i, &d.tuple, &parts).unwrap_err();
        assert!(matches!(err, Error::GwDecode { subset: Subset::S13, .. }));

        let short = &d.get(Subset::S2)[..10];
        let parts = [
            (Subset::S123, d.get(Subset::S123)),
            (Subset::S12, d.get(Subset::S12)),
            (Subset::S23, d.get(Subset::S23)),
            (Subset::S2, short),
        ];
        let err = gw_decode(i, &d.tuple, &parts).unwrap_err();
        assert!(matches!(err, Error::GwDecode { subset: Subset::S2, .. }));
    }

    #[test]
    fn decode_private_only() {
        let l = lib(0, 0, 48, 4);
        let d = gw_encode(&l);
        let i = FileId::new(3).unwrap();
        let parts: Vec<_> = file_components(i).iter().map(|s| (*s, d.get(*s))).collect();
        assert_eq!(gw_decode(i, &d.tuple, &parts).unwrap(), l.file(i));
    }

    #[test]
    fn request_sets_distinct() {
        let r = request_sets(Demand::new(1, 2).unwrap());
        assert_eq!(r.of(Receiver::R1), [Subset::S123, Subset::S12, Subset::S13, Subset::S1]);
        assert_eq!(r.of(Receiver::R2), [Subset::S123, Subset::S12, Subset::S23, Subset::S2]);
        assert_eq!(
            r.l2_pattern,
            L2Pattern::Distinct {
                common: Subset::S12,
                only_r1: Subset::S13,
                only_r2: Subset::S23
            }
        );
    }

    #[test]
    fn request_sets_equal_and_mirror() {
        let r = request_sets(Demand::new(3, 3).unwrap());
        assert_eq!(r.of(Receiver::R1), [Subset::S123, Subset::S13, Subset::S23, Subset::S3]);
        assert_eq!(r.of(Receiver::R1), r.of(Receiver::R2));
        assert_eq!(r.l2_pattern, L2Pattern::Equal { wanted: [Subset::S13, Subset::S23] });

        let a = request_sets(Demand::new(1, 2).unwrap());
        let b = request_sets(Demand::new(2, 1).unwrap());
        assert_eq!(a.of(Receiver::R1), b.of(Receiver::R2));
        assert_eq!(a.of(Receiver::R2), b.of(Receiver::R1));
    }

    #[test]
    fn every_request_set_is_well_formed() {
        for d in Demand::all() {
            let r = request_sets(d);
            for rx in Receiver::BOTH {
                let set = r.of(rx);
                assert!(set.iter().all(|s| s.contains(d.of(rx))));
                let mut l2 = r.l2_pattern.wanted_by(rx);
                l2.sort();
                assert_eq!(l2, [set[1], set[2]]);
            }
        }
    }

    #[test]
    fn generating_tuples_lie_on_sum_rate_plane() {
        for (c0, cp, cv) in [(1200, 1200, 1200), (0, 0, 9600), (24, 48, 96)] {
            let spec = SourceSpec::new(c0, cp, cv, 4).unwrap();
            let t = generating_tuple(&spec);
            assert_eq!(
                (t.rho0, t.rho_pair, t.rho_priv),
                (bits(c0 as i64), bits(cp as i64), bits(cv as i64))
            );
            assert_eq!(t.sum_rate(), entropy_profile_structured(&spec).h_triple);
        }
    }

    #[test]
    fn tuple_rejects_negative() {
        assert!(RateTuple::new(bits(-1), Bits::from_integer(0), bits(0)).is_err());
        assert!(RateTuple::new(1.0f64, 0.0, -0.1).is_err());
    }
}
