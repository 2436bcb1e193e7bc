//! End-to-end pipeline: library -> allocation -> placement -> all nine
//! demands -> delivery -> decoding -> comparison against the analytic curves.

use std::fmt;

use rayon::prelude::*;

use crate::allocator::{allocate, rate_by_allocation, closed_form_rate, CacheAllocation};
use crate::bounds::{gap_certificate, GapCertificate};
use crate::error::{Error, Result};
use crate::gray_wyner::{gw_decode, gw_encode, request_sets, DescriptionSet, RateTuple};
use crate::quantity::{bits, to_u64, Bits, Quantity};
use crate::schemes::{gf2, CacheContents, CacheUnit, L1Scheme, L2Scheme, L3Scheme, MulticastCodeword};
use crate::source_model::{entropy_profile_structured, BitString, EntropyProfile, Library, SourceSpec};
use crate::subset::{Demand, Receiver, Subset};

/// Fault injection for negative tests of the verification path.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SimOptions {
    /// Flip the first transmitted bit of every nonempty codeword.
    pub tamper: bool,
}

/// Placed caches and per-sublibrary schemes for one cache size.
#[derive(Clone, Debug)]
pub struct System {
    pub m: u64,
    pub descriptions: DescriptionSet,
    pub allocation: CacheAllocation<u64>,
    pub l3: L3Scheme,
    pub l2: L2Scheme,
    pub l1: L1Scheme,
    /// Cache contents per sublibrary in L3, L2, L1 order.
    pub placed: [CacheContents; 3],
}

fn whole(v: Bits, what: &'static str) -> Result<u64> {
    to_u64(v).ok_or_else(|| Error::OutOfRange {
        what,
        value: v.render(),
        lo: "0".into(),
        hi: "integral".into(),
    })
}

impl System {
    pub fn build(library: &Library, m: u64) -> Result<Self> {
        let spec = library.spec;
        let descriptions = gw_encode(library);
        let t = descriptions.tuple;
        let a = allocate(bits(m as i64), &t)?;
        let allocation = CacheAllocation {
            m1: whole(a.m1, "L1 budget")?,
            m2: whole(a.m2, "L2 budget")?,
            m3: whole(a.m3, "L3 budget")?,
            regime_id: a.regime_id,
        };
        let q = spec.granularity_q;
        let l3 = L3Scheme::new(allocation.m3, spec.c0)?;
        let l2 = L2Scheme::new(allocation.m2, spec.cp, q)?;
        let l1 = L1Scheme::new(allocation.m1, spec.cv, q)?;
        let placed = [
            l3.place(&descriptions)?,
            l2.place(&descriptions)?,
            l1.place(&descriptions)?,
        ];
        Ok(System {
            m,
            descriptions,
            allocation,
            l3,
            l2,
            l1,
            placed,
        })
    }

    /// Everything each receiver stores.
    pub fn caches(&self) -> CacheContents {
        let mut all = CacheContents::default();
        for c in &self.placed {
            all.extend(c.clone());
        }
        all
    }

    /// Per-sublibrary codewords in L3, L2, L1 order.
    pub fn deliver_parts(&self, demand: Demand) -> Result<[MulticastCodeword; 3]> {
        let pattern = request_sets(demand).l2_pattern;
        let d = &self.descriptions;
        Ok([
            self.l3.deliver(&self.placed[0], d)?,
            self.l2.deliver(pattern, &self.placed[1], d)?,
            self.l1.deliver(demand, &self.placed[2], d)?,
        ])
    }

    pub fn deliver(&self, demand: Demand) -> Result<MulticastCodeword> {
        Ok(MulticastCodeword::concat(self.deliver_parts(demand)?))
    }

    /// Recovers the requested file at `r` from its cache and the codeword.
    pub fn decode(&self, r: Receiver, demand: Demand, codeword: &MulticastCodeword) -> Result<BitString> {
        let caches = self.caches();
        let units: Vec<&CacheUnit> = caches.of(r).iter().chain(&codeword.units).collect();
        let sol = gf2::solve(&units)?;
        let t = &self.descriptions.tuple;
        let wanted = request_sets(demand).of(r);
        let recovered = wanted
            .iter()
            .map(|&s| {
                let len = whole(t.rate_of(s), "description length")? as usize;
                gf2::assemble(&sol, s, len).map(|b| (s, b))
            })
            .collect::<Result<Vec<(Subset, BitString)>>>()?;
        let views: Vec<_> = recovered.iter().map(|(s, b)| (*s, b.as_bitslice())).collect();
        gw_decode(demand.of(r), t, &views)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemandOutcome {
    pub demand: Demand,
    pub transmitted_bits: u64,
    pub decoded: [bool; 2],
    /// Failure reason per receiver.
    pub detail: [Option<String>; 2],
}

fn run_demand_on(system: &System, library: &Library, demand: Demand, opts: &SimOptions) -> Result<DemandOutcome> {
    let mut codeword = system.deliver(demand)?;
    if opts.tamper {
        if let Some(u) = codeword.units.iter_mut().find(|u| !u.payload.is_empty()) {
            let b = u.payload[0];
            u.payload.set(0, !b);
        }
    }
    let mut decoded = [false; 2];
    let mut detail: [Option<String>; 2] = [None, None];
    for r in Receiver::BOTH {
        match system.decode(r, demand, &codeword) {
            Ok(file) if file.as_bitslice() == library.file(demand.of(r)) => decoded[r.index()] = true,
            Ok(_) => detail[r.index()] = Some("reconstructed file differs from the library".into()),
            Err(e) => detail[r.index()] = Some(e.to_string()),
        }
    }
    Ok(DemandOutcome {
        demand,
        transmitted_bits: codeword.total_bits,
        decoded,
        detail,
    })
}

/// Delivers one demand at cache size `m` and checks both reconstructions.
pub fn run_demand(m: u64, library: &Library, demand: Demand) -> Result<DemandOutcome> {
    let system = System::build(library, m)?;
    run_demand_on(&system, library, demand, &SimOptions::default())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    pub m: u64,
    pub allocation: CacheAllocation<u64>,
    pub per_demand: Vec<DemandOutcome>,
    pub peak_bits: u64,
    pub analytic_rate: Bits,
    pub regime_id: u8,
    pub lower_bound: Bits,
    pub gap: Bits,
    pub certificate: GapCertificate,
    pub all_decoded: bool,
    pub cache_used: [u64; 2],
}

impl SimReport {
    /// Largest EQUAL-demand codeword and largest DISTINCT-demand codeword.
    pub fn equal_vs_distinct(&self) -> (u64, u64) {
        let max_of = |distinct: bool| {
            self.per_demand
                .iter()
                .filter(|o| o.demand.is_distinct() == distinct)
                .map(|o| o.transmitted_bits)
                .max()
                .unwrap_or(0)
        };
        (max_of(false), max_of(true))
    }
}

pub fn run_peak(m: u64, library: &Library) -> Result<SimReport> {
    run_peak_with(m, library, &SimOptions::default())
}

pub fn run_peak_with(m: u64, library: &Library, opts: &SimOptions) -> Result<SimReport> {
    let system = System::build(library, m)?;
    let per_demand = Demand::all()
        .map(|d| run_demand_on(&system, library, d, opts))
        .collect::<Result<Vec<_>>>()?;
    let peak_bits = per_demand.iter().map(|o| o.transmitted_bits).max().unwrap_or(0);
    let all_decoded = per_demand.iter().all(|o| o.decoded.iter().all(|x| *x));
    let t = system.descriptions.tuple;
    let h = entropy_profile_structured(&library.spec);
    let mm = bits(m as i64).min2(t.sum_rate());
    let (analytic_rate, regime_id) = closed_form_rate(mm, &t)?;
    let certificate = gap_certificate(mm, &t, &h)?;
    let caches = system.caches();
    Ok(SimReport {
        m,
        allocation: system.allocation,
        per_demand,
        peak_bits,
        analytic_rate,
        regime_id,
        lower_bound: certificate.lower_bound,
        gap: certificate.gap,
        certificate,
        all_decoded,
        cache_used: caches.used_bits,
    })
}

/// Cache sizes where some sublibrary budget sits on a corner of its scheme.
pub fn grid_knots(spec: &SourceSpec) -> Vec<u64> {
    let (r0, rp, rv) = (spec.c0, spec.cp, spec.cv);
    let mut k = vec![
        0,
        rp / 2,
        3 * rp / 2,
        3 * rp / 2 + r0,
        3 * rp / 2 + r0 + 3 * rv / 2,
        r0 + 3 * rv / 2 + 2 * rp,
        r0 + 3 * rp + 3 * rv / 2,
        r0 + 3 * rp + 3 * rv,
    ];
    k.sort_unstable();
    k.dedup();
    k
}

/// Knots plus `subdivisions` equal steps between consecutive knots.
///
/// `subdivisions` must divide the spec granularity for the points to be
/// representable.
pub fn default_grid(spec: &SourceSpec, subdivisions: u64) -> Result<Vec<u64>> {
    if subdivisions == 0 || !spec.granularity_q.is_multiple_of(subdivisions) {
        return Err(Error::Parse(format!(
            "per-regime count {subdivisions} must divide q = {}",
            spec.granularity_q
        )));
    }
    let knots = grid_knots(spec);
    let mut grid = vec![0];
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        for k in 1..=subdivisions {
            grid.push(a + (b - a) * k / subdivisions);
        }
    }
    grid.sort_unstable();
    grid.dedup();
    Ok(grid)
}

/// Checks that every sublibrary budget at `m` is realizable; otherwise
/// reports the nearest representable cache sizes.
pub fn check_on_grid(spec: &SourceSpec, m: u64) -> Result<()> {
    let t: RateTuple = crate::gray_wyner::generating_tuple(spec);
    let a = allocate(bits(m as i64), &t)?;
    let q = spec.granularity_q;
    let fits = to_u64(a.m3).is_some_and(|m3| L3Scheme::new(m3, spec.c0).is_ok())
        && to_u64(a.m2).is_some_and(|m2| L2Scheme::new(m2, spec.cp, q).is_ok())
        && to_u64(a.m1).is_some_and(|m1| L1Scheme::new(m1, spec.cv, q).is_ok());
    if fits {
        return Ok(());
    }
    let grid = default_grid(spec, q)?;
    let below = grid.iter().rev().find(|g| **g <= m).copied().unwrap_or(0);
    let above = grid.iter().find(|g| **g >= m).copied().unwrap_or(below);
    Err(Error::OffGrid {
        sublibrary: "cache size M",
        requested: m.to_string(),
        below: below.to_string(),
        above: above.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateCurvePoint<T = Bits> {
    pub m: T,
    pub achievable: T,
    pub lower_bound: T,
    pub gap: T,
    pub gap_bound: Option<T>,
    pub regime_id: u8,
    pub measured: Option<u64>,
}

/// Analytic points: achievable rate at `t`, lower bound and gap certificate.
pub fn curve_points<T: Quantity>(
    t: &RateTuple<T>,
    h: &EntropyProfile<T>,
    grid: &[T],
) -> Result<Vec<RateCurvePoint<T>>> {
    let mut pts = grid
        .iter()
        .map(|&m| {
            let (_, regime_id) = closed_form_rate(m, t)?;
            let c = gap_certificate(m, t, h)?;
            Ok(RateCurvePoint {
                m,
                achievable: c.achievable,
                lower_bound: c.lower_bound,
                gap: c.gap,
                gap_bound: c.bound_value(),
                regime_id,
                measured: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    pts.sort_by(|a, b| a.m.partial_cmp(&b.m).expect("finite grid"));
    Ok(pts)
}

pub const CSV_HEADER: &str = "M,R_ach,R_lb,gap,gap_bound,regime";

pub fn render_csv<T: Quantity>(points: &[RateCurvePoint<T>], with_measured: bool) -> String {
    let mut out = String::from(CSV_HEADER);
    if with_measured {
        out.push_str(",R_measured");
    }
    out.push('\n');
    for p in points {
        let bound = p.gap_bound.map_or_else(|| "NA".to_string(), |b| b.render());
        out.push_str(&format!(
            "{},{},{},{},{},{}",
            p.m.render(),
            p.achievable.render(),
            p.lower_bound.render(),
            p.gap.render(),
            bound,
            p.regime_id
        ));
        if with_measured {
            out.push(',');
            if let Some(v) = p.measured {
                out.push_str(&v.to_string());
            }
        }
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub grid_points: usize,
    pub violations: Vec<String>,
    /// Location and size of the largest gap on the grid.
    pub max_gap: Option<(u64, Bits)>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "PASS 9 demands × {} grid points", self.grid_points)?;
        } else {
            write!(
                f,
                "FAIL {} violation(s) over 9 demands × {} grid points; first: {}",
                self.violations.len(),
                self.grid_points,
                self.violations[0]
            )?;
        }
        if let Some((m, g)) = self.max_gap {
            write!(f, "; max gap {} at M={m}", g.render())?;
        }
        Ok(())
    }
}

/// Checks every simulation invariant over a set of reports sorted by M.
pub fn verify(reports: &[SimReport]) -> Verdict {
    let mut violations = Vec::new();
    let mut max_gap: Option<(u64, Bits)> = None;
    let mut prev: Option<&SimReport> = None;
    for r in reports {
        let m = r.m;
        for o in &r.per_demand {
            for rx in Receiver::BOTH {
                if !o.decoded[rx.index()] {
                    violations.push(format!(
                        "M={m} demand {}: {rx} failed to decode ({})",
                        o.demand,
                        o.detail[rx.index()].as_deref().unwrap_or("unknown")
                    ));
                }
            }
        }
        if bits(r.peak_bits as i64) != r.analytic_rate {
            violations.push(format!(
                "M={m}: measured peak {} != analytic {}",
                r.peak_bits,
                r.analytic_rate.render()
            ));
        }
        let spec_t = r.certificate.tuple;
        let mm = bits(m as i64).min2(spec_t.sum_rate());
        match rate_by_allocation(mm, &spec_t) {
            Ok(v) if v == r.analytic_rate => {}
            Ok(v) => violations.push(format!(
                "M={m}: sublibrary rates sum to {} != closed form {}",
                v.render(),
                r.analytic_rate.render()
            )),
            Err(e) => violations.push(format!("M={m}: {e}")),
        }
        if r.lower_bound > bits(r.peak_bits as i64) {
            violations.push(format!(
                "M={m}: lower bound {} exceeds measured {}",
                r.lower_bound.render(),
                r.peak_bits
            ));
        }
        if r.cache_used.iter().any(|u| *u > m) {
            violations.push(format!("M={m}: cache holds {:?} bits", r.cache_used));
        }
        let (eq, distinct) = r.equal_vs_distinct();
        if eq > distinct {
            violations.push(format!(
                "M={m}: EQUAL demand sends {eq} > worst DISTINCT {distinct}"
            ));
        }
        if r.certificate.holds() == Some(false) {
            violations.push(format!(
                "M={m}: gap {} exceeds certified bound {:?}",
                r.gap.render(),
                r.certificate.bound
            ));
        }
        if let Some(p) = prev {
            if r.peak_bits > p.peak_bits {
                violations.push(format!(
                    "rate increases from {} at M={} to {} at M={m}",
                    p.peak_bits, p.m, r.peak_bits
                ));
            }
        }
        if max_gap.is_none_or(|(_, g)| r.gap > g) {
            max_gap = Some((m, r.gap));
        }
        prev = Some(r);
    }
    Verdict {
        grid_points: reports.len(),
        violations,
        max_gap,
    }
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub points: Vec<RateCurvePoint>,
    pub reports: Vec<SimReport>,
    pub verdict: Verdict,
}

/// Simulates every grid point (in parallel) and verifies the invariants.
pub fn sweep(spec: &SourceSpec, seed: u64, grid: &[u64], opts: &SimOptions) -> Result<SweepResult> {
    let library = crate::source_model::make_structured_library(*spec, seed)?;
    for &m in grid {
        check_on_grid(spec, m)?;
    }
    let mut reports = grid
        .par_iter()
        .map(|&m| run_peak_with(m, &library, opts))
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by_key(|r| r.m);
    reports.dedup_by_key(|r| r.m);
    let verdict = verify(&reports);
    let points = reports
        .iter()
        .map(|r| RateCurvePoint {
            m: bits(r.m as i64),
            achievable: r.analytic_rate,
            lower_bound: r.lower_bound,
            gap: r.gap,
            gap_bound: r.certificate.bound_value(),
            regime_id: r.regime_id,
            measured: Some(r.peak_bits),
        })
        .collect();
    Ok(SweepResult {
        points,
        reports,
        verdict,
    })
}
