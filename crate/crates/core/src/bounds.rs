//! Lower bound on the optimal peak rate and optimality-gap certificates.

use std::fmt;

use crate::allocator::{allocation_breakpoints, closed_form_rate};
use crate::error::Result;
use crate::gray_wyner::{generating_tuple, RateTuple};
use crate::quantity::{Bits, Quantity};
use crate::source_model::{EntropyProfile, SourceSpec};

/// The four cut constraints, before taking the maximum.
pub fn lower_bound_terms<T: Quantity>(m: T, h: &EntropyProfile<T>) -> [T; 4] {
    let two = T::int(2);
    let three = T::int(3);
    [
        h.h_pair - two * m,
        (h.h_pair - m) / two,
        (h.h_triple - m) / three,
        (h.h_triple + h.h_single) / two - m,
    ]
}

pub fn lower_bound<T: Quantity>(m: T, h: &EntropyProfile<T>) -> T {
    lower_bound_terms(m, h)
        .into_iter()
        .fold(T::zero(), |acc, x| acc.max2(x))
}

/// Operating tuple for the gap analysis of a structured source.
///
/// Independent components put the generating tuple on the sum-rate plane
/// with every private bit carried by a private description.
pub fn tilde_tuple(spec: &SourceSpec) -> RateTuple {
    generating_tuple(spec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapRange {
    Low,
    Mid,
    Optimal,
}

impl fmt::Display for GapRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GapRange::Low => "low",
            GapRange::Mid => "mid",
            GapRange::Optimal => "optimal",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GapBound<T> {
    /// The scheme meets the lower bound.
    ExactOptimality,
    AtMost(T),
    /// The source or tuple does not satisfy the hypotheses of the bound.
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapCertificate<T = Bits> {
    pub m: T,
    pub achievable: T,
    pub lower_bound: T,
    pub gap: T,
    pub bound: GapBound<T>,
    pub range: GapRange,
    /// Tuple the achievable rate was evaluated at.
    pub tuple: RateTuple<T>,
}

impl<T: Quantity> GapCertificate<T> {
    /// Numeric bound, zero when exact optimality is claimed.
    pub fn bound_value(&self) -> Option<T> {
        match self.bound {
            GapBound::ExactOptimality => Some(T::zero()),
            GapBound::AtMost(b) => Some(b),
            GapBound::NotApplicable => None,
        }
    }

    /// Whether the gap respects the bound; `None` when no bound applies.
    pub fn holds(&self) -> Option<bool> {
        self.bound_value()
            .map(|b| self.gap <= b || self.gap.approx_eq(b))
    }
}

/// Compares the achievable rate at `t` with the lower bound at `m`.
pub fn gap_certificate<T: Quantity>(
    m: T,
    t: &RateTuple<T>,
    h: &EntropyProfile<T>,
) -> Result<GapCertificate<T>> {
    let (achievable, _) = closed_form_rate(m, t)?;
    let lower_bound = lower_bound(m, h);
    let [_, low_end, mid_end] = allocation_breakpoints(t);
    let range = if m < low_end {
        GapRange::Low
    } else if m < mid_end {
        GapRange::Mid
    } else {
        GapRange::Optimal
    };
    let applicable = h.symmetric && t.sum_rate().approx_eq(h.h_triple);
    let bound = if !applicable {
        GapBound::NotApplicable
    } else {
        match range {
            GapRange::Low => GapBound::AtMost(h.h_pair_given_one / T::int(2) - t.rho_priv),
            GapRange::Mid => {
                GapBound::AtMost(h.h_pair_given_one / T::int(4) - t.rho_priv / T::int(2))
            }
            GapRange::Optimal => GapBound::ExactOptimality,
        }
    };
    Ok(GapCertificate {
        m,
        achievable,
        lower_bound,
        gap: achievable - lower_bound,
        bound,
        range,
        tuple: *t,
    })
}
