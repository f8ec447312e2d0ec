//! Reading a Courant algebroid off degrees 0 and 1 of a graded vertex Poisson
//! algebra given only through its structure tables.

use std::collections::BTreeMap;

use crate::courant::{CourantAlgebroid, UnitalCommAlgebra};
use crate::error::{Error, Result};
use crate::linear::{BasedSpace, BilinearMap, LinearMap, Vector};
use crate::quotient::{SbAlgebra, SbElement};
use crate::vlie::Gen;
use crate::vpa::{mono_label, Monomial};

/// Degree-wise tables of an N-graded vertex Poisson algebra, truncated at
/// `spaces.len() - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVpaView {
    pub spaces: Vec<BasedSpace>,
    /// `D: V_p → V_{p+1}`.
    pub d: BTreeMap<usize, LinearMap>,
    /// `u_n v: V_p × V_q → V_{p+q-n-1}`, keyed by `(n, p, q)`.
    pub prod: BTreeMap<(usize, usize, usize), BilinearMap>,
    /// `u·v: V_p × V_q → V_{p+q}`, keyed by `(p, q)`.
    pub mult: BTreeMap<(usize, usize), BilinearMap>,
}

fn grading(map: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Grading {
        map: map.into(),
        message: message.into(),
    }
}

impl GradedVpaView {
    pub fn max_degree(&self) -> usize {
        self.spaces.len().saturating_sub(1)
    }

    fn space(&self, map: &str, p: usize) -> Result<&BasedSpace> {
        self.spaces
            .get(p)
            .ok_or_else(|| grading(map, format!("degree {p} is beyond the view")))
    }

    fn expect(&self, map: &str, what: &str, found: &BasedSpace, p: usize) -> Result<()> {
        let want = self.space(map, p)?;
        if found != want {
            return Err(grading(
                map,
                format!("{what} is `{}`, expected degree-{p} space `{}`", found.name(), want.name()),
            ));
        }
        Ok(())
    }

    /// Checks that every table respects the grading and that degree 0 is a
    /// unital commutative associative algebra.
    pub fn validate(&self) -> Result<()> {
        if self.spaces.len() < 2 {
            return Err(grading("spaces", "degrees 0 and 1 are required"));
        }
        for (&p, m) in &self.d {
            let name = format!("d{p}");
            self.expect(&name, "domain", m.domain(), p)?;
            self.expect(&name, "codomain", m.codomain(), p + 1)?;
        }
        for (&(n, p, q), m) in &self.prod {
            let name = format!("prod{n}_{p}{q}");
            if p + q < n + 1 {
                return Err(grading(name, "negative target degree"));
            }
            self.expect(&name, "left factor", m.left(), p)?;
            self.expect(&name, "right factor", m.right(), q)?;
            self.expect(&name, "codomain", m.codomain(), p + q - n - 1)?;
        }
        for (&(p, q), m) in &self.mult {
            let name = format!("mult{p}{q}");
            self.expect(&name, "left factor", m.left(), p)?;
            self.expect(&name, "right factor", m.right(), q)?;
            self.expect(&name, "codomain", m.codomain(), p + q)?;
        }
        for (name, present) in [
            ("mult00", self.mult.contains_key(&(0, 0))),
            ("mult01", self.mult.contains_key(&(0, 1))),
            ("prod0_11", self.prod.contains_key(&(0, 1, 1))),
            ("prod1_11", self.prod.contains_key(&(1, 1, 1))),
            ("prod0_10", self.prod.contains_key(&(0, 1, 0))),
            ("d0", self.d.contains_key(&0)),
        ] {
            if !present {
                return Err(grading(name, "missing"));
            }
        }
        let algebra = self.degree0()?;
        let r = algebra.check();
        if !r.passed() {
            return Err(grading("mult00", format!("not commutative associative: {}", r.violations[0])));
        }
        Ok(())
    }

    /// The degree-0 algebra with its unit solved from the multiplication
    /// table.
    pub fn degree0(&self) -> Result<UnitalCommAlgebra> {
        let mult = self.mult.get(&(0, 0)).ok_or_else(|| grading("mult00", "missing"))?;
        let s = &self.spaces[0];
        if mult.left() != s || mult.right() != s || mult.codomain() != s {
            return Err(grading("mult00", "not an operation on degree 0"));
        }
        let unit = UnitalCommAlgebra::solve_unit(mult).ok_or_else(|| grading("mult00", "no unit"))?;
        Ok(UnitalCommAlgebra {
            space: s.clone(),
            mult: mult.clone(),
            unit,
        })
    }

    /// Assembles the tables of `S(C)_B` in degrees `0..=q.cutoff()`, using the
    /// normal-form monomials as bases.
    pub fn from_quotient(q: &SbAlgebra) -> Result<GradedVpaView> {
        let top = q.cutoff();
        let mut spaces = vec![q.x.a.space.clone(), q.x.b.clone()];
        let mut index: Vec<BTreeMap<Monomial, usize>> = vec![BTreeMap::new(), BTreeMap::new()];
        for i in 0..q.x.b.dim() {
            index[1].insert(vec![Gen::B { n: 0, idx: i }], i);
        }
        let mut monos: Vec<Vec<SbElement>> = vec![
            (0..q.x.a.space.dim()).map(|i| q.a_elem(&Vector::basis(&q.x.a.space, i))).collect(),
            (0..q.x.b.dim()).map(|i| q.b_elem(&Vector::basis(&q.x.b, i))).collect(),
        ];
        for p in 2..=top {
            let k = q.relations(p)?;
            let basis: Vec<Monomial> = q.pure_b_monomials(p).into_iter().filter(|m| !k.is_pivot(m)).collect();
            let labels: Vec<String> = basis.iter().map(|m| mono_label(q.vl(), m)).collect();
            spaces.push(BasedSpace::new(format!("V{p}"), labels)?);
            index.push(basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect());
            monos.push(
                basis
                    .into_iter()
                    .map(|m| SbElement {
                        a_part: Vector::zero(&q.x.a.space),
                        monomial_part: [(m, crate::scalar::int(1))].into_iter().collect(),
                    })
                    .collect(),
            );
        }
        let to_vec = |u: &SbElement, p: usize| -> Result<Vector> {
            if p == 0 {
                return u.as_a_vector();
            }
            if !u.a_part.is_zero() {
                return Err(Error::Structure(format!("expected a degree-{p} element")));
            }
            let mut v = Vector::zero(&spaces[p]);
            for (m, c) in &u.monomial_part {
                let i = index[p]
                    .get(m)
                    .ok_or_else(|| Error::Structure(format!("`{}` is not a degree-{p} basis monomial", mono_label(q.vl(), m))))?;
                v.add_coeff(*i, c);
            }
            Ok(v)
        };
        let table = |p: usize, q2: usize, r: usize, f: &(dyn Fn(&SbElement, &SbElement) -> Result<SbElement> + Sync)| -> Result<BilinearMap> {
            let mut m = BilinearMap::zero(&spaces[p], &spaces[q2], &spaces[r]);
            let pairs: Vec<(usize, usize)> = (0..spaces[p].dim())
                .flat_map(|i| (0..spaces[q2].dim()).map(move |j| (i, j)))
                .collect();
            let out = crate::par::map(&pairs, |&(i, j)| f(&monos[p][i], &monos[q2][j]));
            for (&(i, j), v) in pairs.iter().zip(out) {
                m.set(i, j, to_vec(&v?, r)?);
            }
            Ok(m)
        };
        let mut mult = BTreeMap::new();
        let mut prod = BTreeMap::new();
        let mut d = BTreeMap::new();
        for p in 0..=top {
            for r in 0..=top {
                if p + r <= top {
                    mult.insert((p, r), table(p, r, p + r, &|u, v| q.sb_multiply(u, v))?);
                }
                for n in 0..(p + r) {
                    let t = p + r - n - 1;
                    if t <= top {
                        prod.insert((n, p, r), table(p, r, t, &|u, v| q.sb_product(n, u, v))?);
                    }
                }
            }
            if p < top {
                let mut m = LinearMap::zero(&spaces[p], &spaces[p + 1]);
                for (i, u) in monos[p].iter().enumerate() {
                    m.set_column(i, to_vec(&q.sb_d(u)?, p + 1)?);
                }
                d.insert(p, m);
            }
        }
        if let Some(m) = mult.get_mut(&(0, 0)) {
            m.set_symmetric_flag(q.x.a.mult.symmetric());
        }
        if let Some(m) = prod.get_mut(&(1, 1, 1)) {
            m.set_symmetric_flag(q.x.pairing.symmetric());
        }
        Ok(GradedVpaView { spaces, d, prod, mult })
    }
}

/// The Courant algebroid on degree 1 over degree 0: bracket `u_0 v`, pairing
/// `u_1 v`, anchor `u_0 a`, action `a·u`, `∂ = D` on degree 0. The result is
/// not checked; run the Courant checks on it to certify the view.
pub fn extract_courant(v: &GradedVpaView) -> Result<CourantAlgebroid> {
    v.validate()?;
    let a = v.degree0()?;
    let mut pairing = v.prod[&(1, 1, 1)].clone();
    let sym = pairing.clone().with_symmetric().is_ok();
    pairing.set_symmetric_flag(sym);
    Ok(CourantAlgebroid {
        a,
        b: v.spaces[1].clone(),
        action: v.mult[&(0, 1)].clone(),
        bracket: v.prod[&(0, 1, 1)].clone(),
        anchor: v.prod[&(0, 1, 0)].clone(),
        pairing,
        partial: v.d[&0].clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::courant::{check_compat, check_courant, examples};

    fn view(x: &CourantAlgebroid, cutoff: usize) -> GradedVpaView {
        GradedVpaView::from_quotient(&SbAlgebra::new(x, cutoff).unwrap()).unwrap()
    }

    #[test]
    fn extraction_reproduces_examples() {
        for (name, x) in examples::acceptance_set() {
            let v = view(&x, 3);
            v.validate().unwrap();
            let y = extract_courant(&v).unwrap();
            assert_eq!(y, x, "{name}");
            assert!(check_courant(&y).passed(), "{name}");
            assert!(check_compat(&y).passed(), "{name}");
        }
    }

    #[test]
    fn heisenberg_view_dimensions() {
        // Degree 2 is spanned by Dβ and β·β.
        let v = view(&examples::heisenberg(), 3);
        let dims: Vec<usize> = v.spaces.iter().map(|s| s.dim()).collect();
        assert_eq!(dims, vec![1, 1, 2, 3]);
        assert_eq!(v.prod[&(1, 1, 1)].entry(0, 0), &Vector::basis(&v.spaces[0], 0));
    }

    #[test]
    fn injected_anchor_violation_is_caught() {
        let x = examples::heisenberg();
        let mut v = view(&x, 2);
        let e = Vector::basis(&v.spaces[0], 0);
        v.prod.get_mut(&(0, 1, 0)).unwrap().set(0, 0, e);
        let y = extract_courant(&v).unwrap();
        let r = check_courant(&y);
        assert!(r.fails("c1") || r.fails("c2"), "{r}");
    }

    #[test]
    fn grading_violations_are_named() {
        let mut v = view(&examples::trivial(1), 2);
        let wrong = v.prod[&(0, 1, 1)].clone();
        v.prod.insert((1, 1, 1), wrong);
        match v.validate() {
            Err(Error::Grading { map, .. }) => assert_eq!(map, "prod1_11"),
            other => panic!("{other:?}"),
        }
        let mut v = view(&examples::trivial(1), 2);
        v.d.remove(&0);
        assert!(matches!(extract_courant(&v), Err(Error::Grading { .. })));
    }

    #[test]
    fn unit_is_solved_not_assumed() {
        let x = examples::exact(3).unwrap();
        let v = view(&x, 2);
        assert_eq!(v.degree0().unwrap().unit, x.a.unit);
    }
}
