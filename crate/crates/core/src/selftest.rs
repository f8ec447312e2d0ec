//! The acceptance criteria as runnable checks, shared by the `selftest`
//! subcommand and the acceptance test target.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::courant::{self, examples, mutate, CourantAlgebroid};
use crate::forward::{extract_courant, GradedVpaView};
use crate::quotient::{check_ideal_stability, check_shape, roundtrip, SbAlgebra};
use crate::tca;
use crate::vlie::{check_vertex_lie, VertexLie};
use crate::vpa::{check_vpa, ScAlgebra, VpaCheckConfig};

pub const CORPUS_SIZE: usize = 500;
pub const CORPUS_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub elapsed_ms: u128,
    pub budget_ms: u128,
    pub failures: Vec<String>,
}

impl CriterionResult {
    pub fn within_budget(&self) -> bool {
        self.elapsed_ms <= self.budget_ms
    }

    pub fn ok(&self) -> bool {
        self.passed && self.within_budget()
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} {:<24} {} in {:.3}s (budget {}s)",
            self.id,
            self.name,
            if self.ok() { "PASS" } else { "FAIL" },
            self.elapsed_ms as f64 / 1000.0,
            self.budget_ms / 1000
        )?;
        if !self.within_budget() {
            write!(f, " over budget")?;
        }
        for m in self.failures.iter().take(10) {
            write!(f, "\n    {m}")?;
        }
        Ok(())
    }
}

fn run(id: u8, name: &'static str, budget: Duration, body: impl FnOnce(&mut Vec<String>)) -> CriterionResult {
    let start = Instant::now();
    let mut failures = Vec::new();
    body(&mut failures);
    CriterionResult {
        id,
        name,
        passed: failures.is_empty(),
        elapsed_ms: start.elapsed().as_millis(),
        budget_ms: budget.as_millis(),
        failures,
    }
}

fn note(failures: &mut Vec<String>, name: &str, r: &crate::report::CheckReport) {
    if !r.passed() {
        failures.push(format!("{name}: {}", r.violations[0]));
    }
}

/// Cutoff used for the vertex Poisson checks of each example.
pub fn vpa_cutoff(x: &CourantAlgebroid) -> usize {
    if x.a.space.dim() > 1 {
        3
    } else {
        4
    }
}

pub fn courant_axioms() -> CriterionResult {
    run(1, "courant axioms", Duration::from_secs(1), |f| {
        for (name, x) in examples::acceptance_set() {
            note(f, &name, &courant::check_courant(&x));
            note(f, &name, &courant::check_compat(&x));
            note(f, &name, &courant::check_annihilation(&x));
            let ms = mutate::mutants(&x, 20);
            if ms.len() < 20 {
                f.push(format!("{name}: only {} mutants", ms.len()));
            }
            let survivors = crate::par::map(&ms, |m| {
                let y = &m.algebroid;
                let caught = !courant::check_courant(y).passed()
                    || !courant::check_compat(y).passed()
                    || !courant::check_annihilation(y).passed();
                (!caught).then(|| m.site.clone())
            });
            for s in survivors.into_iter().flatten() {
                f.push(format!("{name}: mutant `{s}` passes every check"));
            }
        }
    })
}

pub fn bridge() -> CriterionResult {
    run(2, "bridge equivalence", Duration::from_secs(1), |f| {
        for (name, x) in examples::named() {
            let t = match courant::to_1tca(&x) {
                Ok(t) => t,
                Err(e) => {
                    f.push(format!("{name}: {e}"));
                    continue;
                }
            };
            note(f, &name, &tca::check_all(&t));
            match courant::from_1tca(&t, &x.a, &x.action) {
                Ok(y) if y == x => {}
                Ok(_) => f.push(format!("{name}: tables differ after the round trip")),
                Err(e) => f.push(format!("{name}: {e}")),
            }
        }
    })
}

pub fn vertex_lie() -> CriterionResult {
    run(3, "vertex Lie algebra", Duration::from_secs(10), |f| {
        for (name, x) in examples::named() {
            let vl = VertexLie::new(courant::to_1tca_unchecked(&x), 4);
            note(f, &name, &check_vertex_lie(&vl));
        }
    })
}

pub fn vertex_poisson() -> CriterionResult {
    run(4, "vertex Poisson algebra", Duration::from_secs(30), |f| {
        for (name, x) in examples::acceptance_set() {
            let sc = ScAlgebra::new(VertexLie::new(courant::to_1tca_unchecked(&x), vpa_cutoff(&x)));
            note(f, &name, &check_vpa(&sc, VpaCheckConfig::default()));
        }
    })
}

fn quotients(f: &mut Vec<String>) -> Vec<(String, SbAlgebra)> {
    examples::named()
        .into_iter()
        .filter_map(|(name, x)| match SbAlgebra::new(&x, 3) {
            Ok(q) => Some((name, q)),
            Err(e) => {
                f.push(format!("{name}: {e}"));
                None
            }
        })
        .collect()
}

pub fn ideal_stability() -> CriterionResult {
    run(5, "ideal stability", Duration::from_secs(5), |f| {
        for (name, q) in quotients(f) {
            note(f, &name, &check_ideal_stability(&q));
        }
    })
}

pub fn quotient_shape() -> CriterionResult {
    run(6, "quotient shape", Duration::from_secs(30), |f| {
        for (name, q) in quotients(f) {
            note(f, &name, &check_shape(&q, CORPUS_SIZE, CORPUS_SEED));
        }
    })
}

pub fn round_trip() -> CriterionResult {
    run(7, "round trip", Duration::from_secs(30), |f| {
        for (name, x) in examples::named() {
            match roundtrip(&x, 3) {
                Ok((r, _)) => note(f, &name, &r),
                Err(e) => f.push(format!("{name}: {e}")),
            }
            let extracted = SbAlgebra::new(&x, 3)
                .and_then(|q| GradedVpaView::from_quotient(&q))
                .and_then(|v| extract_courant(&v));
            match extracted {
                Ok(y) => {
                    if y != x {
                        f.push(format!("{name}: the graded view does not reproduce the input"));
                    }
                    note(f, &name, &courant::check_courant(&y));
                }
                Err(e) => f.push(format!("{name}: {e}")),
            }
        }
    })
}

pub type Criterion = fn() -> CriterionResult;

pub const CRITERIA: [Criterion; 7] = [
    courant_axioms,
    bridge,
    vertex_lie,
    vertex_poisson,
    ideal_stability,
    quotient_shape,
    round_trip,
];

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| c()).collect()
}
