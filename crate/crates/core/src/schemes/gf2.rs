//! Generic GF(2) decoder.
//!
//! Every cache unit and every transmitted unit is a linear equation
//! "XOR of packets = payload". Receivers decode by Gauss-Jordan elimination
//! over the packets they have seen, so decoding does not depend on any
//! scheme-specific recovery rule.

use std::collections::BTreeMap;

use bitvec::prelude::*;

use super::packet::{CacheUnit, PacketRef};
use crate::error::{Error, Result};
use crate::source_model::BitString;
use crate::subset::Subset;

struct Row {
    coeffs: BitVec<u64, Lsb0>,
    payload: BitString,
    origin: BitVec<u64, Lsb0>,
}

impl Row {
    fn xor_with(&mut self, other: &Row) -> Result<()> {
        if self.payload.len() != other.payload.len() {
            return Err(Error::MalformedUnit(
                "equations sharing a packet have different lengths".into(),
            ));
        }
        self.coeffs ^= &other.coeffs;
        self.payload ^= &other.payload;
        self.origin ^= &other.origin;
        Ok(())
    }
}

/// Packets recovered from a set of equations.
#[derive(Clone, Debug, Default)]
pub struct Solution {
    pub packets: BTreeMap<PacketRef, BitString>,
    /// Indices of the input units whose XOR yields each recovered packet.
    pub derivations: BTreeMap<PacketRef, Vec<usize>>,
    /// Every packet mentioned by some equation.
    pub seen: Vec<PacketRef>,
}

pub fn solve(units: &[&CacheUnit]) -> Result<Solution> {
    let mut seen: Vec<PacketRef> = units
        .iter()
        .flat_map(|u| u.composition.iter().copied())
        .collect();
    seen.sort();
    seen.dedup();
    let col = |p: &PacketRef| seen.binary_search(p).expect("collected above");

    let mut rows: Vec<Row> = units
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let mut coeffs = bitvec![u64, Lsb0; 0; seen.len()];
            for p in &u.composition {
                let c = col(p);
                let cur = coeffs[c];
                coeffs.set(c, !cur);
            }
            let mut origin = bitvec![u64, Lsb0; 0; units.len()];
            origin.set(i, true);
            Row {
                coeffs,
                payload: u.payload.clone(),
                origin,
            }
        })
        .collect();

    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for c in 0..seen.len() {
        let Some(r) = (pivot_row..rows.len()).find(|&r| rows[r].coeffs[c]) else {
            continue;
        };
        rows.swap(pivot_row, r);
        let (head, tail) = rows.split_at_mut(pivot_row);
        let (pivot, tail) = tail.split_first_mut().expect("pivot row exists");
        for row in head.iter_mut().chain(tail.iter_mut()) {
            if row.coeffs[c] {
                row.xor_with(pivot)?;
            }
        }
        pivots.push((pivot_row, c));
        pivot_row += 1;
    }

    for row in &rows[pivot_row..] {
        if row.payload.any() {
            return Err(Error::Mismatch("inconsistent equations".into()));
        }
    }

    let mut sol = Solution::default();
    for (r, c) in pivots {
        let row = &rows[r];
        if row.coeffs.count_ones() == 1 {
            sol.packets.insert(seen[c], row.payload.clone());
            sol.derivations
                .insert(seen[c], row.origin.iter_ones().collect());
        }
    }
    sol.seen = seen;
    Ok(sol)
}

/// Reassembles whole descriptions from a solution.
///
/// The packets of each wanted description that appear in the equations
/// must tile it exactly and all be recovered.
pub fn assemble(sol: &Solution, subset: Subset, len: usize) -> Result<BitString> {
    let mut parts: Vec<&PacketRef> = sol.seen.iter().filter(|p| p.subset == subset).collect();
    parts.sort_by_key(|p| (p.start, p.len));
    let mut out = BitString::with_capacity(len);
    for p in parts {
        if p.len == 0 {
            continue;
        }
        if p.start != out.len() {
            return Err(Error::Unresolvable(format!(
                "W{subset}: packet {p} at offset {} does not continue at {}",
                p.start,
                out.len()
            )));
        }
        let bits = sol
            .packets
            .get(p)
            .ok_or_else(|| Error::Unresolvable(format!("{p} cannot be recovered")))?;
        out.extend_from_bitslice(bits);
    }
    if out.len() != len {
        return Err(Error::Unresolvable(format!(
            "W{subset}: recovered {} of {len} bits",
            out.len()
        )));
    }
    Ok(out)
}

/// Solves and assembles each wanted `(subset, length)`.
pub fn decode_descriptions(
    units: &[&CacheUnit],
    wanted: &[(Subset, usize)],
) -> Result<Vec<BitString>> {
    let sol = solve(units)?;
    wanted
        .iter()
        .map(|&(s, len)| assemble(&sol, s, len))
        .collect()
}
