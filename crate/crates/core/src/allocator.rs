//! Cache split across the three sublibraries and the analytic peak rates.

use crate::error::{Error, Result};
use crate::gray_wyner::RateTuple;
use crate::quantity::Quantity;

/// Budgets per sublibrary and the cache-encoder regime (1..=4) that produced them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CacheAllocation<T> {
    pub m1: T,
    pub m2: T,
    pub m3: T,
    pub regime_id: u8,
}

fn half<T: Quantity>(x: T) -> T {
    x / T::int(2)
}

fn three<T: Quantity>() -> T {
    T::int(3)
}

/// Upper ends of allocation regimes 1..=3: 3ρ'/2, ρ0+3(ρ'+ρ)/2, ρ0+3ρ'+3ρ/2.
pub fn allocation_breakpoints<T: Quantity>(t: &RateTuple<T>) -> [T; 3] {
    let three = three::<T>();
    [
        half(three * t.rho_pair),
        t.rho0 + half(three * (t.rho_pair + t.rho_priv)),
        t.rho0 + three * t.rho_pair + half(three * t.rho_priv),
    ]
}

/// Upper ends of the rate branches 1..=3: ρ'/2, ρ0+3(ρ'+ρ)/2, ρ0+3ρ'+3ρ/2.
pub fn rate_breakpoints<T: Quantity>(t: &RateTuple<T>) -> [T; 3] {
    let [_, b2, b3] = allocation_breakpoints(t);
    [half(t.rho_pair), b2, b3]
}

fn check_nonneg<T: Quantity>(what: &'static str, v: T, hi: T) -> Result<()> {
    if v < T::zero() || v > hi {
        return Err(Error::OutOfRange {
            what,
            value: v.render(),
            lo: "0".into(),
            hi: hi.render(),
        });
    }
    Ok(())
}

/// Water-filling split of `m` across L1, L2 and L3.
///
/// Capacity beyond the sum rate clamps to caching everything.
pub fn allocate<T: Quantity>(m: T, t: &RateTuple<T>) -> Result<CacheAllocation<T>> {
    if m < T::zero() {
        return Err(Error::OutOfRange {
            what: "cache size M",
            value: m.render(),
            lo: "0".into(),
            hi: "inf".into(),
        });
    }
    let three = three::<T>();
    let [b1, b2, b3] = allocation_breakpoints(t);
    let m = m.min2(t.sum_rate());
    let alloc = if m < b1 {
        CacheAllocation {
            m1: T::zero(),
            m2: m,
            m3: T::zero(),
            regime_id: 1,
        }
    } else if m < b2 {
        let m2 = b1;
        let m3 = (m - m2).min2(t.rho0);
        CacheAllocation {
            m1: m - m2 - m3,
            m2,
            m3,
            regime_id: 2,
        }
    } else if m < b3 {
        let m1 = half(three * t.rho_priv);
        CacheAllocation {
            m1,
            m2: m - t.rho0 - m1,
            m3: t.rho0,
            regime_id: 3,
        }
    } else {
        CacheAllocation {
            m1: m - t.rho0 - three * t.rho_pair,
            m2: three * t.rho_pair,
            m3: t.rho0,
            regime_id: 4,
        }
    };
    Ok(alloc)
}

/// Peak rate of the two-request scheme: lower convex envelope of its corners.
pub fn rate_l2<T: Quantity>(m2: T, rho_pair: T) -> Result<T> {
    let three = three::<T>();
    check_nonneg("L2 budget", m2, three * rho_pair)?;
    let two = T::int(2);
    Ok(if m2 < half(rho_pair) {
        three * rho_pair - two * m2
    } else if m2 < half(three * rho_pair) {
        T::ratio(5, 2) * rho_pair - m2
    } else {
        two * rho_pair - T::ratio(2, 3) * m2
    })
}

/// Peak rate of the private sublibrary: envelope of (0,2ρ), (3ρ/2,ρ/2), (3ρ,0).
pub fn rate_l1<T: Quantity>(m1: T, rho_priv: T) -> Result<T> {
    let three = three::<T>();
    check_nonneg("L1 budget", m1, three * rho_priv)?;
    Ok(if m1 < half(three * rho_priv) {
        T::int(2) * rho_priv - m1
    } else {
        rho_priv - m1 / three
    })
}

/// Uncached remainder of W_123, multicast once.
pub fn rate_l3<T: Quantity>(m3: T, rho0: T) -> Result<T> {
    if m3 < T::zero() {
        return Err(Error::OutOfRange {
            what: "L3 budget",
            value: m3.render(),
            lo: "0".into(),
            hi: rho0.render(),
        });
    }
    Ok(rho0 - m3.min2(rho0))
}

/// Closed-form peak rate of the multiple-request scheme and its branch (1..=4).
pub fn closed_form_rate<T: Quantity>(m: T, t: &RateTuple<T>) -> Result<(T, u8)> {
    check_nonneg("cache size M", m, t.sum_rate())?;
    let (r0, rp, rv) = (t.rho0, t.rho_pair, t.rho_priv);
    let [b1, b2, b3] = rate_breakpoints(t);
    let two = T::int(2);
    let three = three::<T>();
    Ok(if m < b1 {
        (r0 + three * rp + two * rv - two * m, 1)
    } else if m < b2 {
        (r0 + T::ratio(5, 2) * rp + two * rv - m, 2)
    } else if m < b3 {
        (
            T::ratio(2, 3) * r0 + two * rp + T::ratio(3, 2) * rv - T::ratio(2, 3) * m,
            3,
        )
    } else {
        ((r0 - m) / three + rp + rv, 4)
    })
}

/// Sum of the sublibrary rates under [`allocate`].
pub fn rate_by_allocation<T: Quantity>(m: T, t: &RateTuple<T>) -> Result<T> {
    let a = allocate(m, t)?;
    Ok(rate_l1(a.m1, t.rho_priv)? + rate_l2(a.m2, t.rho_pair)? + rate_l3(a.m3, t.rho0)?)
}

/// Closed-form rate sampled on `grid`.
pub fn achievable_curve<T: Quantity>(t: &RateTuple<T>, grid: &[T]) -> Result<Vec<(T, T, u8)>> {
    grid.iter()
        .map(|&m| closed_form_rate(m, t).map(|(r, id)| (m, r, id)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantity::{bits, Bits};

    fn unit() -> RateTuple {
        RateTuple::new(bits(1200), bits(1200), bits(1200)).unwrap()
    }

    fn alloc(m: i64) -> (i64, i64, i64, u8) {
        let a = allocate(bits(m), &unit()).unwrap();
        (
            a.m1.to_integer(),
            a.m2.to_integer(),
            a.m3.to_integer(),
            a.regime_id,
        )
    }

    #[test]
    fn allocation_examples() {
        assert_eq!(alloc(1000), (0, 1000, 0, 1));
        assert_eq!(alloc(2400), (0, 1800, 600, 2));
        assert_eq!(alloc(7000), (2200, 3600, 1200, 4));
        assert_eq!(alloc(9000), (3600, 3600, 1200, 4));
        assert!(allocate(bits(-1), &unit()).is_err());
    }

    #[test]
    fn sublibrary_rates() {
        assert_eq!(rate_l2(bits(0), bits(1200)).unwrap(), bits(3600));
        assert_eq!(rate_l2(bits(600), bits(1200)).unwrap(), bits(2400));
        assert_eq!(rate_l2(bits(3000), bits(1200)).unwrap(), bits(400));
        assert!(rate_l2(bits(3601), bits(1200)).is_err());
        assert_eq!(rate_l1(bits(0), bits(1200)).unwrap(), bits(2400));
        assert_eq!(rate_l1(bits(1800), bits(1200)).unwrap(), bits(600));
        assert_eq!(rate_l1(bits(3600), bits(1200)).unwrap(), bits(0));
        assert_eq!(rate_l3(bits(0), bits(1200)).unwrap(), bits(1200));
        assert_eq!(rate_l3(bits(1200), bits(1200)).unwrap(), bits(0));
        assert_eq!(rate_l3(bits(600), bits(1200)).unwrap(), bits(600));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_rate(bits(0), &unit()).unwrap(), (bits(7200), 1));
        assert_eq!(closed_form_rate(bits(2400), &unit()).unwrap(), (bits(4200), 2));
        assert_eq!(closed_form_rate(bits(6000), &unit()).unwrap(), (bits(1000), 3));
        assert_eq!(closed_form_rate(bits(8400), &unit()).unwrap(), (bits(0), 4));
        assert!(closed_form_rate(bits(8401), &unit()).is_err());
    }

    #[test]
    fn branch_continuity_at_second_breakpoint() {
        let t = unit();
        let b = bits(4800);
        let branch2 = t.rho0 + Bits::new(5, 2) * t.rho_pair + bits(2) * t.rho_priv - b;
        let branch3 = Bits::new(2, 3) * t.rho0 + bits(2) * t.rho_pair
            + Bits::new(3, 2) * t.rho_priv
            - Bits::new(2, 3) * b;
        assert_eq!(branch2, bits(1800));
        assert_eq!(branch3, bits(1800));
    }

    #[test]
    fn curve_regimes_in_order() {
        let grid: Vec<Bits> = (0..=84).map(|k| bits(k * 100)).collect();
        let curve = achievable_curve(&unit(), &grid).unwrap();
        assert!(curve.windows(2).all(|w| w[0].1 >= w[1].1 && w[0].2 <= w[1].2));
        assert_eq!(curve.first().unwrap().2, 1);
        assert_eq!(curve.last().unwrap().2, 4);
    }

    #[test]
    fn f64_agrees_with_exact() {
        let t = RateTuple::new(1200.0, 1200.0, 1200.0).unwrap();
        for m in [0.0, 450.0, 2400.0, 5700.0, 8400.0] {
            let (r, _) = closed_form_rate(m, &t).unwrap();
            let (e, _) = closed_form_rate(Bits::from_integer(m as i64), &unit()).unwrap();
            assert!(r.approx_eq(e.to_f64()));
        }
    }
}
