//! Axiom check reports.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::par;

/// One failed identity instance: the axiom, the basis tuple it was evaluated
/// on, and both sides rendered in canonical term syntax.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub module: String,
    pub axiom: String,
    pub tuple: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} at ({}): lhs = {}, rhs = {}",
            self.module,
            self.axiom,
            self.tuple.join(", "),
            self.lhs,
            self.rhs
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    /// Number of identity instances evaluated.
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(mut self, other: CheckReport) -> CheckReport {
        self.checked += other.checked;
        self.violations.extend(other.violations);
        self.violations.sort();
        self
    }

    pub fn merge_all(reports: impl IntoIterator<Item = CheckReport>) -> CheckReport {
        reports.into_iter().fold(CheckReport::default(), CheckReport::merge)
    }

    pub fn fails(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    /// Distinct violated axiom ids, sorted.
    pub fn failed_axioms(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.violations.iter().map(|v| v.axiom.clone()).collect();
        ids.sort();
        ids.dedup();
        ids
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "pass ({} identities checked)", self.checked)
        } else {
            writeln!(
                f,
                "FAIL ({} of {} identities violated)",
                self.violations.len(),
                self.checked
            )?;
            for v in &self.violations {
                writeln!(f, "  {v}")?;
            }
            Ok(())
        }
    }
}

/// Accumulates identity checks for one enumeration item.
pub struct Scan {
    module: &'static str,
    report: CheckReport,
}

impl Scan {
    pub fn new(module: &'static str) -> Scan {
        Scan {
            module,
            report: CheckReport::default(),
        }
    }

    /// Records one instance of `lhs == rhs`.
    pub fn eq<T: PartialEq + fmt::Display>(&mut self, axiom: &str, tuple: &[&str], lhs: &T, rhs: &T) {
        self.report.checked += 1;
        if lhs != rhs {
            self.fail(axiom, tuple, lhs.to_string(), rhs.to_string());
        }
    }

    /// Records a check whose outcome was computed by the caller.
    pub fn holds(&mut self, axiom: &str, tuple: &[&str], ok: bool, lhs: impl FnOnce() -> String, rhs: impl FnOnce() -> String) {
        self.report.checked += 1;
        if !ok {
            self.fail(axiom, tuple, lhs(), rhs());
        }
    }

    pub fn fail(&mut self, axiom: &str, tuple: &[&str], lhs: String, rhs: String) {
        self.report.violations.push(Violation {
            module: self.module.to_string(),
            axiom: axiom.to_string(),
            tuple: tuple.iter().map(|s| s.to_string()).collect(),
            lhs,
            rhs,
        });
    }

    pub fn finish(mut self) -> CheckReport {
        self.report.violations.sort();
        self.report
    }
}

/// Runs `f` once per item, possibly in parallel, and merges the results in a
/// canonical order.
pub fn scan<T, F>(module: &'static str, items: &[T], f: F) -> CheckReport
where
    T: Sync,
    F: Fn(&T, &mut Scan) + Sync + Send,
{
    let parts = par::map(items, |item| {
        let mut s = Scan::new(module);
        f(item, &mut s);
        s.report
    });
    let mut out = CheckReport::default();
    for p in parts {
        out.checked += p.checked;
        out.violations.extend(p.violations);
    }
    out.violations.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_is_order_independent() {
        let items: Vec<i64> = (0..50).collect();
        let r = scan("test", &items, |i, s| {
            s.eq("even", &[&i.to_string()], &(i % 2), &0);
        });
        assert_eq!(r.checked, 50);
        assert_eq!(r.violations.len(), 25);
        let mut sorted = r.violations.clone();
        sorted.sort();
        assert_eq!(r.violations, sorted);
        assert_eq!(r.failed_axioms(), vec!["even".to_string()]);
    }

    #[test]
    fn json_field_names_are_stable() {
        let mut s = Scan::new("courant");
        s.fail("c5", &["u", "v"], "1*e".into(), "0".into());
        let json = serde_json::to_value(s.finish()).unwrap();
        let v = &json["violations"][0];
        for key in ["module", "axiom", "tuple", "lhs", "rhs"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
