//! Human-readable rendering of one placement/delivery/decoding run.

use std::fmt::Write;

use crate::error::Result;
use crate::gray_wyner::request_sets;
use crate::harness::System;
use crate::quantity::Quantity;
use crate::schemes::{gf2, CacheUnit, SharingPlan};
use crate::source_model::Library;
use crate::subset::{Demand, Receiver};

fn units_line(units: &[CacheUnit]) -> String {
    let labels: Vec<String> = units.iter().map(CacheUnit::label).collect();
    format!("{{{}}}", labels.join(", "))
}

fn plan_line<C: std::fmt::Debug + Copy>(name: &str, budget: u64, plan: &SharingPlan<C>) -> String {
    match plan.lambda() {
        None => format!("{name}: budget {budget}, corner {:?}", plan.parts[0].corner),
        Some(l) => format!(
            "{name}: budget {budget}, memory share {:?} on {} / {:?} on {}",
            plan.parts[0].corner,
            l,
            plan.parts[1].corner,
            plan.parts[1].weight
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub text: String,
    /// Both receivers recovered their files.
    pub ok: bool,
}

/// Trace of cache size `m` and `demand`; `m` must be on the grid.
pub fn render_trace(library: &Library, m: u64, demand: Demand) -> Result<Trace> {
    crate::harness::check_on_grid(&library.spec, m)?;
    let system = System::build(library, m)?;
    let spec = library.spec;
    let a = system.allocation;
    let req = request_sets(demand);
    let mut out = String::new();
    let mut ok = true;
    let w = &mut out;
    writeln!(
        w,
        "source: c0={} cp={} cv={} q={} seed={}",
        spec.c0, spec.cp, spec.cv, spec.granularity_q, library.seed
    )
    .unwrap();
    writeln!(w, "tuple: {}", system.descriptions.tuple).unwrap();
    writeln!(
        w,
        "M = {m}: m3={} m2={} m1={} (regime {})",
        a.m3, a.m2, a.m1, a.regime_id
    )
    .unwrap();
    writeln!(w, "L3: budget {} of {} bits cached as a common prefix", a.m3, system.l3.rho0).unwrap();
    writeln!(w, "{}", plan_line("L2", a.m2, &system.l2.plan)).unwrap();
    writeln!(w, "{}", plan_line("L1", a.m1, &system.l1.plan)).unwrap();
    writeln!(w, "demand {demand}: L2 {}", req.l2_pattern).unwrap();

    let caches = system.caches();
    for r in Receiver::BOTH {
        writeln!(w, "Z_{r} = {}", units_line(caches.of(r))).unwrap();
    }
    let y = system.deliver(demand)?;
    if y.is_empty() {
        writeln!(w, "Y = {{}} (empty codeword)").unwrap();
    } else {
        writeln!(w, "Y = {} ({} bits)", units_line(&y.units), y.total_bits).unwrap();
    }

    for r in Receiver::BOTH {
        let cached = caches.of(r);
        let units: Vec<&CacheUnit> = cached.iter().chain(&y.units).collect();
        let tag = |i: usize| {
            if i < cached.len() {
                format!("Z[{}]", units[i].label())
            } else {
                format!("Y[{}]", units[i].label())
            }
        };
        writeln!(w, "decode {r}:").unwrap();
        let sol = gf2::solve(&units)?;
        for s in req.of(r) {
            for p in sol.seen.iter().filter(|p| p.subset == s && p.len > 0) {
                match sol.derivations.get(p) {
                    Some(from) => {
                        let parts: Vec<String> = from.iter().map(|i| tag(*i)).collect();
                        writeln!(w, "  {p} = {}", parts.join(" + ")).unwrap();
                    }
                    None => writeln!(w, "  {p} unresolved").unwrap(),
                }
            }
        }
        let file = demand.of(r);
        match system.decode(r, demand, &y) {
            Ok(bits) if bits.as_bitslice() == library.file(file) => {
                writeln!(w, "  X{file} recovered ({} bits): OK", bits.len()).unwrap()
            }
            Ok(_) => {
                ok = false;
                writeln!(w, "  X{file} mismatch: FAIL").unwrap()
            }
            Err(e) => {
                ok = false;
                writeln!(w, "  X{file} failed: {e}").unwrap()
            }
        }
    }
    let t = &system.descriptions.tuple;
    writeln!(w, "sum rate {}", t.sum_rate().render()).unwrap();
    Ok(Trace { text: out, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source_model::{make_structured_library, SourceSpec};

    #[test]
    fn example_trace() {
        let lib = make_structured_library(SourceSpec::new(0, 1200, 0, 4).unwrap(), 0).unwrap();
        let tr = render_trace(&lib, 600, Demand::new(1, 2).unwrap()).unwrap();
        assert!(tr.ok);
        let t = tr.text;
        assert!(t.contains("Z_r1 = {W12(1)+W13(1)+W23(1)}"), "{t}");
        assert!(t.contains("Z_r2 = {W12(2)+W13(2)+W23(2)}"));
        assert!(t.contains("Y = {W12(1), W12(2), W13(2), W23(1)} (2400 bits)"));
        assert!(t.contains("W13(1) = Z[W12(1)+W13(1)+W23(1)] + Y[W12(1)] + Y[W23(1)]"));
        assert_eq!(t.matches(": OK").count(), 2);
    }

    #[test]
    fn full_cache_trace() {
        let lib = make_structured_library(SourceSpec::new(0, 1200, 0, 4).unwrap(), 0).unwrap();
        let t = render_trace(&lib, 3600, Demand::new(1, 2).unwrap()).unwrap().text;
        assert!(t.contains("Y = {} (empty codeword)"));
    }

    #[test]
    fn off_grid_is_rejected() {
        let lib = make_structured_library(SourceSpec::new(0, 1200, 0, 4).unwrap(), 0).unwrap();
        assert!(render_trace(&lib, 700, Demand::new(1, 2).unwrap()).is_err());
    }
}
