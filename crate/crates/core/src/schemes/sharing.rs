//! Memory sharing between adjacent corner schemes.
//!
//! A budget strictly between two corners at `Ma < m < Mb` is served by
//! splitting every description into a leading share of weight
//! `lambda = (Mb - m) / (Mb - Ma)` run by the lower corner and a trailing
//! share run by the upper one. Rates and memories add across the shares.

use num_traits::One;

use super::packet::Segment;
use crate::error::{Error, Result};
use crate::quantity::{to_u64, Bits};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Share<C> {
    pub corner: C,
    pub segment: Segment,
    /// Fraction of each description assigned to this share.
    pub weight: Bits,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharingPlan<C> {
    pub parts: Vec<Share<C>>,
}

/// A concrete segment of every description in a sublibrary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegmentView<C> {
    pub corner: C,
    pub segment: Segment,
    pub start: usize,
    pub len: usize,
}

impl<C: Copy> SharingPlan<C> {
    pub fn pure(corner: C) -> Self {
        SharingPlan {
            parts: vec![Share {
                corner,
                segment: Segment::Whole,
                weight: Bits::one(),
            }],
        }
    }

    /// Weight of the lower corner, when two corners are shared.
    pub fn lambda(&self) -> Option<Bits> {
        (self.parts.len() == 2).then(|| self.parts[0].weight)
    }

    pub fn segments(&self, len: usize) -> Vec<SegmentView<C>> {
        let mut start = 0usize;
        self.parts
            .iter()
            .map(|s| {
                let seg_len = to_u64(s.weight * Bits::from_integer(len as i64))
                    .expect("plan weights are validated against the description length")
                    as usize;
                let v = SegmentView {
                    corner: s.corner,
                    segment: s.segment,
                    start,
                    len: seg_len,
                };
                start += seg_len;
                v
            })
            .collect()
    }
}

/// Corner memories in bits for a description length `len`.
fn corner_bits<C: Copy>(corners: &[(C, Bits)], len: u64) -> Vec<(C, Bits)> {
    let len = Bits::from_integer(len as i64);
    corners.iter().map(|&(c, f)| (c, f * len)).collect()
}

/// Plans a budget of `budget` bits over `corners` (memory as a multiple of
/// the description length, ascending). Shares must be whole multiples of
/// `1/q` and leave every segment divisible by `packet_unit`.
pub fn plan<C: Copy>(
    name: &'static str,
    corners: &[(C, Bits)],
    budget: u64,
    len: u64,
    q: u64,
    packet_unit: u64,
) -> Result<SharingPlan<C>> {
    let abs = corner_bits(corners, len);
    let m = Bits::from_integer(budget as i64);
    let (first, last) = (abs[0], abs[abs.len() - 1]);
    if m < first.1 || m > last.1 {
        return Err(Error::OutOfRange {
            what: name,
            value: budget.to_string(),
            lo: first.1.to_string(),
            hi: last.1.to_string(),
        });
    }
    if let Some(&(c, _)) = abs.iter().find(|(_, b)| *b == m) {
        return Ok(SharingPlan::pure(c));
    }
    let (lo, hi) = abs
        .windows(2)
        .map(|w| (w[0], w[1]))
        .find(|(a, b)| a.1 < m && m < b.1)
        .expect("budget lies strictly between two corners");
    let lambda = (hi.1 - m) / (hi.1 - lo.1);
    let steps = lambda * Bits::from_integer(q as i64);
    let seg = lambda * Bits::from_integer(len as i64);
    let on_grid = steps.is_integer()
        && to_u64(seg).is_some_and(|s| s % packet_unit == 0 && (len - s).is_multiple_of(packet_unit));
    if !on_grid {
        let step = (hi.1 - lo.1) / Bits::from_integer(q as i64);
        let k = ((m - lo.1) / step).floor();
        let below = lo.1 + k * step;
        let above = below + step;
        return Err(Error::OffGrid {
            sublibrary: name,
            requested: budget.to_string(),
            below: below.to_string(),
            above: above.to_string(),
        });
    }
    Ok(SharingPlan {
        parts: vec![
            Share {
                corner: lo.0,
                segment: Segment::A,
                weight: lambda,
            },
            Share {
                corner: hi.0,
                segment: Segment::B,
                weight: Bits::one() - lambda,
            },
        ],
    })
}

/// Every budget representable by [`plan`] on a `1/q` grid, ascending.
pub fn representable<C: Copy>(corners: &[(C, Bits)], len: u64, q: u64) -> Vec<u64> {
    let abs = corner_bits(corners, len);
    let mut out: Vec<u64> = Vec::new();
    for w in abs.windows(2) {
        let (a, b) = (w[0].1, w[1].1);
        if a == b {
            continue;
        }
        for k in 0..=q {
            let v = a + (b - a) * Bits::new(k as i64, q as i64);
            if let Some(v) = to_u64(v) {
                out.push(v);
            }
        }
    }
    if out.is_empty() {
        out.push(to_u64(abs[0].1).unwrap_or(0));
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const CORNERS: [(char, (i64, i64)); 3] = [('x', (0, 1)), ('y', (3, 2)), ('z', (3, 1))];

    fn corners() -> Vec<(char, Bits)> {
        CORNERS
            .iter()
            .map(|&(c, (n, d))| (c, Bits::new(n, d)))
            .collect()
    }

    #[test]
    fn exact_corners_are_pure() {
        let p = plan("L", &corners(), 1800, 1200, 4, 2).unwrap();
        assert_eq!(p, SharingPlan::pure('y'));
        assert_eq!(p.lambda(), None);
    }

    #[test]
    fn midpoint_shares_half() {
        let p = plan("L", &corners(), 900, 1200, 4, 2).unwrap();
        assert_eq!(p.lambda(), Some(Bits::new(1, 2)));
        let segs = p.segments(1200);
        assert_eq!((segs[0].corner, segs[0].start, segs[0].len), ('x', 0, 600));
        assert_eq!((segs[1].corner, segs[1].start, segs[1].len), ('y', 600, 600));
    }

    #[test]
    fn off_grid_reports_neighbours() {
        let err = plan("L", &corners(), 1000, 1200, 4, 2).unwrap_err();
        match err {
            Error::OffGrid { below, above, .. } => {
                assert_eq!((below.as_str(), above.as_str()), ("900", "1350"));
            }
            e => panic!("{e}"),
        }
        assert!(matches!(
            plan("L", &corners(), 4000, 1200, 4, 2),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn lattice() {
        let r = representable(&corners(), 1200, 2);
        assert_eq!(r, vec![0, 900, 1800, 2700, 3600]);
        assert_eq!(representable(&corners(), 0, 4), vec![0]);
    }
}
