//! 1-truncated conformal algebras `C0 ⊕ C1`.
//!
//! Only the products that can be nonzero are stored: `u0a`, `a0u`, `u0v`
//! and `u1v`. Every other product has negative degree and reads as zero.

use std::fmt;

use crate::linear::{BasedSpace, BilinearMap, LinearMap, Vector};
use crate::report::{scan, CheckReport, Scan};

const MODULE: &str = "tca";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneTruncatedConformalAlgebra {
    pub c0: BasedSpace,
    pub c1: BasedSpace,
    pub partial: LinearMap,
    /// `u0a`, `C1 × C0 → C0`.
    pub p0_10: BilinearMap,
    /// `a0u`, `C0 × C1 → C0`.
    pub p0_01: BilinearMap,
    /// `u0v`, `C1 × C1 → C1`.
    pub p0_11: BilinearMap,
    /// `u1v`, `C1 × C1 → C0`.
    pub p1_11: BilinearMap,
}

/// An element of `C0 ⊕ C1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graded {
    pub c0: Vector,
    pub c1: Vector,
}

impl Graded {
    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn plus(&self, o: &Graded) -> Graded {
        Graded {
            c0: self.c0.plus(&o.c0),
            c1: self.c1.plus(&o.c1),
        }
    }
}

impl fmt::Display for Graded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.c0.is_zero(), self.c1.is_zero()) {
            (_, true) => write!(f, "{}", self.c0),
            (true, false) => write!(f, "{}", self.c1),
            (false, false) => write!(f, "{} + {}", self.c0, self.c1),
        }
    }
}

impl OneTruncatedConformalAlgebra {
    pub fn zero(c0: &BasedSpace, c1: &BasedSpace) -> Self {
        OneTruncatedConformalAlgebra {
            c0: c0.clone(),
            c1: c1.clone(),
            partial: LinearMap::zero(c0, c1),
            p0_10: BilinearMap::zero(c1, c0, c0),
            p0_01: BilinearMap::zero(c0, c1, c0),
            p0_11: BilinearMap::zero(c1, c1, c1),
            p1_11: BilinearMap::zero(c1, c1, c0),
        }
    }

    pub fn g0(&self, a: Vector) -> Graded {
        Graded {
            c0: a,
            c1: Vector::zero(&self.c1),
        }
    }

    pub fn g1(&self, u: Vector) -> Graded {
        Graded {
            c0: Vector::zero(&self.c0),
            c1: u,
        }
    }

    /// Basis of `C0 ⊕ C1` with labels, degree-0 part first.
    pub fn basis(&self) -> Vec<(String, Graded)> {
        let mut out = Vec::with_capacity(self.c0.dim() + self.c1.dim());
        for i in 0..self.c0.dim() {
            out.push((self.c0.label(i).to_string(), self.g0(Vector::basis(&self.c0, i))));
        }
        for i in 0..self.c1.dim() {
            out.push((self.c1.label(i).to_string(), self.g1(Vector::basis(&self.c1, i))));
        }
        out
    }

    /// `x_i y` for `i ∈ {0, 1}`; products of negative degree are zero.
    pub fn prod(&self, i: usize, x: &Graded, y: &Graded) -> Graded {
        match i {
            0 => Graded {
                c0: self.p0_10.eval(&x.c1, &y.c0).plus(&self.p0_01.eval(&x.c0, &y.c1)),
                c1: self.p0_11.eval(&x.c1, &y.c1),
            },
            1 => self.g0(self.p1_11.eval(&x.c1, &y.c1)),
            _ => self.g0(Vector::zero(&self.c0)),
        }
    }

    pub fn d(&self, x: &Graded) -> Graded {
        self.g1(self.partial.eval(&x.c0))
    }
}

fn pairs(n: usize, m: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect()
}

fn triples(n: usize, m: usize, k: usize) -> Vec<(usize, usize, usize)> {
    (0..n)
        .flat_map(|i| (0..m).flat_map(move |j| (0..k).map(move |l| (i, j, l))))
        .collect()
}

/// `(∂a)_0 = 0`, `(∂a)_1 = -a_0` and `∂(u_0 a) = u_0 ∂a`.
pub fn check_derivation(t: &OneTruncatedConformalAlgebra) -> CheckReport {
    let basis = t.basis();
    let items = pairs(t.c0.dim(), basis.len());
    scan(MODULE, &items, |&(ai, xi), s| {
        let a = Vector::basis(&t.c0, ai);
        let da = t.g1(t.partial.eval(&a));
        let (xl, x) = &basis[xi];
        let al = t.c0.label(ai);
        let zero = t.g0(Vector::zero(&t.c0));
        s.eq("der-d0", &[al, xl], &t.prod(0, &da, x), &zero);
        if !x.c1.is_zero() {
            let lhs = t.prod(1, &da, x);
            let rhs = t.g0(t.p0_01.eval(&a, &x.c1).neg());
            s.eq("der-d1", &[al, xl], &lhs, &rhs);
            let u = &x.c1;
            let lhs = t.partial.eval(&t.p0_10.eval(u, &a));
            let rhs = t.p0_11.eval(u, &t.partial.eval(&a));
            s.eq("der-hom", &[xl, al], &lhs, &rhs);
        }
    })
}

/// `u_0 a = -a_0 u`, `u_0 v = -v_0 u + ∂(v_1 u)` and `u_1 v = v_1 u`.
pub fn check_commutativity(t: &OneTruncatedConformalAlgebra) -> CheckReport {
    let n1 = t.c1.dim();
    let items = pairs(n1, n1.max(t.c0.dim()));
    scan(MODULE, &items, |&(ui, j), s| {
        let u = Vector::basis(&t.c1, ui);
        let ul = t.c1.label(ui);
        if j < t.c0.dim() {
            let a = Vector::basis(&t.c0, j);
            s.eq(
                "comm-anchor",
                &[ul, t.c0.label(j)],
                &t.p0_10.eval(&u, &a),
                &t.p0_01.eval(&a, &u).neg(),
            );
        }
        if j < n1 {
            let v = Vector::basis(&t.c1, j);
            let vl = t.c1.label(j);
            let rhs = t.p0_11.eval(&v, &u).neg().plus(&t.partial.eval(&t.p1_11.eval(&v, &u)));
            s.eq("comm-bracket", &[ul, vl], &t.p0_11.eval(&u, &v), &rhs);
            s.eq("comm-pairing", &[ul, vl], &t.p1_11.eval(&u, &v), &t.p1_11.eval(&v, &u));
        }
    })
}

/// `α_0 β_i γ = β_i α_0 γ + (α_0 β)_i γ` over all basis triples of `C0 ⊕ C1`.
pub fn check_associativity(t: &OneTruncatedConformalAlgebra) -> CheckReport {
    let basis = t.basis();
    let n = basis.len();
    let items = triples(n, n, n);
    scan(MODULE, &items, |&(a, b, c), s| {
        let (al, x) = &basis[a];
        let (bl, y) = &basis[b];
        let (cl, z) = &basis[c];
        for (i, axiom) in [(0, "assoc-0"), (1, "assoc-1")] {
            let lhs = t.prod(0, x, &t.prod(i, y, z));
            let rhs = t.prod(i, y, &t.prod(0, x, z)).plus(&t.prod(i, &t.prod(0, x, y), z));
            s.eq(axiom, &[al, bl, cl], &lhs, &rhs);
        }
    })
}

pub fn check_all(t: &OneTruncatedConformalAlgebra) -> CheckReport {
    CheckReport::merge_all([check_derivation(t), check_commutativity(t), check_associativity(t)])
}

/// The equivalent list of conditions phrased through the Leibniz algebra
/// `(C1, u_0 v)`, its module `C0`, the pairing `u_1 v` and `∂`.
pub fn check_leibniz_form(t: &OneTruncatedConformalAlgebra) -> CheckReport {
    let n0 = t.c0.dim();
    let n1 = t.c1.dim();
    let items = triples(n1, n1, n1.max(n0));
    let br = |u: &Vector, v: &Vector| t.p0_11.eval(u, v);
    let act = |u: &Vector, a: &Vector| t.p0_10.eval(u, a);
    let pair = |u: &Vector, v: &Vector| t.p1_11.eval(u, v);
    scan(MODULE, &items, |&(ui, vi, k), s: &mut Scan| {
        let u = Vector::basis(&t.c1, ui);
        let v = Vector::basis(&t.c1, vi);
        let (ul, vl) = (t.c1.label(ui), t.c1.label(vi));
        if k < n1 {
            let w = Vector::basis(&t.c1, k);
            let wl = t.c1.label(k);
            s.eq(
                "leibniz",
                &[ul, vl, wl],
                &br(&u, &br(&v, &w)),
                &br(&br(&u, &v), &w).plus(&br(&v, &br(&u, &w))),
            );
            s.eq(
                "pairing-hom",
                &[ul, vl, wl],
                &act(&u, &pair(&v, &w)),
                &pair(&br(&u, &v), &w).plus(&pair(&v, &br(&u, &w))),
            );
        }
        if k < n0 {
            let a = Vector::basis(&t.c0, k);
            let al = t.c0.label(k);
            s.eq(
                "module",
                &[ul, vl, al],
                &act(&u, &act(&v, &a)),
                &act(&br(&u, &v), &a).plus(&act(&v, &act(&u, &a))),
            );
        }
        if vi == 0 && k == 0 {
            for ai in 0..n0 {
                let a = Vector::basis(&t.c0, ai);
                let al = t.c0.label(ai);
                let da = t.partial.eval(&a);
                s.eq("partial-hom", &[ul, al], &t.partial.eval(&act(&u, &a)), &br(&u, &da));
                s.eq("annihilate", &[al, ul], &br(&da, &u), &Vector::zero(&t.c1));
                s.eq("pairing-partial", &[al, ul], &pair(&da, &u), &t.p0_01.eval(&a, &u).neg());
                s.eq("anti", &[ul, al], &act(&u, &a), &t.p0_01.eval(&a, &u).neg());
                for bi in 0..n0 {
                    let b = Vector::basis(&t.c0, bi);
                    s.eq("annihilate", &[al, t.c0.label(bi)], &act(&da, &b), &Vector::zero(&t.c0));
                }
            }
        }
        if k == 0 {
            s.eq(
                "symmetrize",
                &[ul, vl],
                &br(&u, &v).plus(&br(&v, &u)),
                &t.partial.eval(&pair(&u, &v)),
            );
            s.eq("symmetry", &[ul, vl], &pair(&u, &v), &pair(&v, &u));
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::courant::{examples, to_1tca_unchecked};
    use crate::scalar::int;

    fn sl2() -> OneTruncatedConformalAlgebra {
        to_1tca_unchecked(&examples::quadratic_lie_sl2())
    }

    #[test]
    fn all_zero_products_pass() {
        let c0 = BasedSpace::new("C0", ["a", "a2"]).unwrap();
        let c1 = BasedSpace::new("C1", ["u"]).unwrap();
        let mut t = OneTruncatedConformalAlgebra::zero(&c0, &c1);
        assert!(check_all(&t).passed());
        t.partial.set_column(0, Vector::basis(&c1, 0));
        assert!(check_derivation(&t).passed());
        assert!(check_associativity(&t).passed());
    }

    #[test]
    fn sl2_passes_all_three() {
        let t = sl2();
        assert!(check_derivation(&t).passed());
        assert!(check_commutativity(&t).passed());
        assert!(check_associativity(&t).passed());
    }

    #[test]
    fn sl2_associativity_spot_value() {
        // h_0 <e, f> = <[h,e], f> + <e, [h,f]> reads 0 = 8 - 8.
        let t = sl2();
        let idx = |l: &str| t.c1.index_of(l).unwrap();
        let (h, e, f) = (
            t.g1(Vector::basis(&t.c1, idx("H"))),
            t.g1(Vector::basis(&t.c1, idx("E"))),
            t.g1(Vector::basis(&t.c1, idx("F"))),
        );
        let lhs = t.prod(0, &h, &t.prod(1, &e, &f));
        let first = t.prod(1, &t.prod(0, &h, &e), &f);
        let second = t.prod(1, &e, &t.prod(0, &h, &f));
        assert!(lhs.is_zero());
        assert_eq!(first.c0.coeff(0), int(8));
        assert_eq!(second.c0.coeff(0), int(-8));
    }

    #[test]
    fn perturbed_pairing_entry_is_detected() {
        let mut t = sl2();
        let (e, f) = (t.c1.index_of("E").unwrap(), t.c1.index_of("F").unwrap());
        let bumped = t.p1_11.entry(e, f).plus(&Vector::basis(&t.c0, 0));
        t.p1_11.set(e, f, bumped);
        let r = check_all(&t);
        assert!(!r.passed());
        assert!(r.violations.iter().any(|v| v.tuple.contains(&"E".to_string())));
    }

    #[test]
    fn swap_asymmetric_pairing_fails_commutativity() {
        let mut t = sl2();
        let (e, f) = (t.c1.index_of("E").unwrap(), t.c1.index_of("F").unwrap());
        t.p1_11.set(f, e, Vector::basis(&t.c0, 0).scaled(&int(5)));
        let r = check_commutativity(&t);
        assert!(r.fails("comm-pairing"));
    }

    #[test]
    fn broken_jacobi_fails_at_zero() {
        let mut t = sl2();
        let idx = |l: &str| t.c1.index_of(l).unwrap();
        let (e, h, f) = (idx("E"), idx("H"), idx("F"));
        let v = Vector::basis(&t.c1, h).plus(&Vector::basis(&t.c1, e));
        t.p0_11.set(e, f, v.clone());
        t.p0_11.set(f, e, v.neg());
        let r = check_associativity(&t);
        assert!(r.fails("assoc-0"));
    }

    #[test]
    fn leibniz_form_agrees_on_examples() {
        for x in examples::all() {
            let t = to_1tca_unchecked(&x);
            assert_eq!(check_all(&t).passed(), check_leibniz_form(&t).passed());
        }
    }

    #[test]
    fn partial_image_annihilates_on_exact() {
        let t = to_1tca_unchecked(&examples::exact(3).unwrap());
        let r = check_leibniz_form(&t);
        assert!(!r.fails("annihilate"), "{r}");
        assert!(!r.fails("pairing-partial"), "{r}");
    }
}
