//! The truncated graded vertex Poisson algebra `S(C)`: polynomials in the
//! normal-form generators of `C`, with `D` extended as a derivation and the
//! products `u_n` extended as derivations of the commutative product.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linear::format_terms;
use crate::report::{scan, CheckReport, Scan};
use crate::scalar::{binomial, factorial, int, sign, Scalar};
use crate::vlie::{Gen, VertexLie};

const MODULE: &str = "vpa";

/// A commutative monomial: generators sorted ascending; empty is `1`.
pub type Monomial = Vec<Gen>;

pub fn degree(m: &[Gen]) -> usize {
    m.iter().map(|g| g.degree()).sum()
}

pub fn mono_mul(a: &[Gen], b: &[Gen]) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// `m` with the factor at `pos` removed.
pub fn without(m: &[Gen], pos: usize) -> Monomial {
    let mut out = m.to_vec();
    out.remove(pos);
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScElement {
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl ScElement {
    pub fn zero() -> ScElement {
        ScElement::default()
    }

    pub fn one() -> ScElement {
        ScElement::monomial(Vec::new())
    }

    pub fn monomial(mut m: Monomial) -> ScElement {
        m.sort();
        let mut out = ScElement::zero();
        out.terms.insert(m, Scalar::one());
        out
    }

    pub fn gen(g: Gen) -> ScElement {
        ScElement::monomial(vec![g])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn axpy(&mut self, c: &Scalar, o: &ScElement) {
        for (m, x) in &o.terms {
            self.add_term(m.clone(), &(c * x));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> ScElement {
        let mut out = ScElement::zero();
        out.axpy(c, self);
        out
    }

    pub fn plus(&self, o: &ScElement) -> ScElement {
        let mut out = self.clone();
        out.axpy(&Scalar::one(), o);
        out
    }

    pub fn minus(&self, o: &ScElement) -> ScElement {
        let mut out = self.clone();
        out.axpy(&-Scalar::one(), o);
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|m| degree(m)).collect();
        d.sort();
        d.dedup();
        d
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| degree(m)).max()
    }
}

pub fn mono_label(vl: &VertexLie, m: &[Gen]) -> String {
    if m.is_empty() {
        return "1".to_string();
    }
    m.iter().map(|g| vl.label(*g)).collect::<Vec<_>>().join("&")
}

pub struct ShownSc<'a>(pub &'a VertexLie, pub &'a ScElement);

impl fmt::Display for ShownSc<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(self.1.terms.iter().map(|(m, c)| (mono_label(self.0, m), c))))
    }
}

#[derive(PartialEq)]
struct Cmp<'a>(&'a VertexLie, ScElement);

impl fmt::Display for Cmp<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        ShownSc(self.0, &self.1).fmt(f)
    }
}

/// `S(C)` truncated at the cutoff of the underlying `C`.
#[derive(Clone, Debug)]
pub struct ScAlgebra {
    pub c: VertexLie,
}

impl ScAlgebra {
    pub fn new(c: VertexLie) -> ScAlgebra {
        ScAlgebra { c }
    }

    pub fn cutoff(&self) -> usize {
        self.c.cutoff
    }

    pub fn show<'a>(&'a self, u: &'a ScElement) -> ShownSc<'a> {
        ShownSc(&self.c, u)
    }

    fn guard(&self, deg: usize) -> Result<()> {
        if deg > self.cutoff() {
            Err(Error::CutoffExceeded {
                degree: deg,
                cutoff: self.cutoff(),
            })
        } else {
            Ok(())
        }
    }

    pub fn multiply(&self, u: &ScElement, v: &ScElement) -> Result<ScElement> {
        let mut out = ScElement::zero();
        for (m1, c1) in &u.terms {
            for (m2, c2) in &v.terms {
                self.guard(degree(m1) + degree(m2))?;
                out.add_term(mono_mul(m1, m2), &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// Replaces the factor at `pos` of `m` by a `C` element, multiplying out.
    fn substitute(&self, out: &mut ScElement, coef: &Scalar, m: &[Gen], pos: usize, c: &crate::vlie::CElement) {
        if c.is_zero() {
            return;
        }
        let rest = without(m, pos);
        for (g, x) in c.terms() {
            out.add_term(mono_mul(&rest, &[g]), &(coef * x));
        }
    }

    pub fn d(&self, u: &ScElement) -> Result<ScElement> {
        let mut out = ScElement::zero();
        for (m, c) in &u.terms {
            self.guard(degree(m) + 1)?;
            for pos in 0..m.len() {
                let dg = self.c.d_pow_unchecked(&self.c.gen(m[pos]), 1);
                self.substitute(&mut out, c, m, pos, &dg);
            }
        }
        Ok(out)
    }

    pub fn d_pow(&self, u: &ScElement, k: usize) -> Result<ScElement> {
        let mut out = u.clone();
        for _ in 0..k {
            if out.is_zero() {
                break;
            }
            out = self.d(&out)?;
        }
        Ok(out)
    }

    /// `g_n v` for a generator `g`, acting on each factor of `v` through the
    /// products of `C` and extended as a derivation.
    pub fn gen_act(&self, n: usize, g: Gen, v: &ScElement) -> ScElement {
        let mut out = ScElement::zero();
        for (m, c) in &v.terms {
            for pos in 0..m.len() {
                if pos > 0 && m[pos] == m[pos - 1] {
                    // Repeated factors contribute identical terms; count them once with multiplicity.
                    continue;
                }
                let mult = m[pos..].iter().take_while(|h| **h == m[pos]).count();
                let p = self.c.product_gen(n, g, m[pos]);
                self.substitute(&mut out, &(c * int(mult as i64)), m, pos, &p);
            }
        }
        out
    }

    /// `M_n h` for a monomial `M` and a generator `h`, via skew symmetry:
    /// `M_n h = Σ_{j≥n} (-1)^{j+1}/(j-n)! D^{j-n}(h_j M)`.
    fn mono_on_gen(&self, n: usize, m: &[Gen], h: Gen) -> Result<ScElement> {
        let mut out = ScElement::zero();
        let mm = ScElement::monomial(m.to_vec());
        let top = (degree(m) + h.degree()).saturating_sub(1);
        for j in n..=top {
            let hj = self.gen_act(j, h, &mm);
            if hj.is_zero() {
                continue;
            }
            let c = sign(j + 1) / factorial(j - n);
            out.axpy(&c, &self.d_pow(&hj, j - n)?);
        }
        Ok(out)
    }

    /// `u_n v`. A single generator acts as a derivation through the products
    /// of `C`; a longer monomial acts on each generator of `v` through skew
    /// symmetry, again extended as a derivation in `v`.
    pub fn product(&self, n: usize, u: &ScElement, v: &ScElement) -> Result<ScElement> {
        let mut out = ScElement::zero();
        for (mu, cu) in &u.terms {
            match mu.len() {
                0 => {}
                1 => out.axpy(cu, &self.gen_act(n, mu[0], v)),
                _ => {
                    for (mv, cv) in &v.terms {
                        let coef = cu * cv;
                        for pos in 0..mv.len() {
                            let p = self.mono_on_gen(n, mu, mv[pos])?;
                            if p.is_zero() {
                                continue;
                            }
                            let rest = ScElement::monomial(without(mv, pos));
                            out.axpy(&coef, &self.multiply(&p, &rest)?);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `g_n h` for generators computed through skew symmetry instead of the
    /// products of `C`.
    pub fn product_via_skew(&self, n: usize, g: Gen, h: Gen) -> Result<ScElement> {
        self.mono_on_gen(n, &[g], h)
    }

    /// Monomials of degree at most `max_degree` with at most `max_factors`
    /// factors, including `1`.
    pub fn monomials(&self, max_degree: usize, max_factors: usize) -> Vec<Monomial> {
        let gens: Vec<Gen> = (0..=max_degree).flat_map(|d| self.c.basis_of_degree(d)).collect();
        let mut out = vec![Vec::new()];
        let mut frontier: Vec<Monomial> = vec![Vec::new()];
        for _ in 0..max_factors {
            let mut next = Vec::new();
            for m in &frontier {
                let start = m.last().copied();
                for &g in &gens {
                    if start.is_some_and(|s| g < s) {
                        continue;
                    }
                    if degree(m) + g.degree() > max_degree {
                        continue;
                    }
                    let mut m2 = m.clone();
                    m2.push(g);
                    next.push(m2);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

/// Enumeration bounds for [`check_vpa`].
#[derive(Clone, Copy, Debug)]
pub struct VpaCheckConfig {
    /// Factor bound of the spanning set.
    pub max_factors: usize,
    /// Bound on the total number of factors in a checked pair or triple.
    pub tuple_factors: usize,
}

impl Default for VpaCheckConfig {
    fn default() -> Self {
        VpaCheckConfig {
            max_factors: 3,
            tuple_factors: 4,
        }
    }
}

fn deg_label(m: &Monomial, vl: &VertexLie) -> String {
    mono_label(vl, m)
}

/// Checks the vertex Poisson algebra identities on a spanning set of
/// monomials: products are derivations, the component identities hold,
/// `D` and every product shift degree correctly, `1` is annihilated, and
/// `[D, u_n] = -n u_{n-1}`. Generator pairs are also evaluated both ways to
/// confirm the extension is the unique one.
pub fn check_vpa(sc: &ScAlgebra, cfg: VpaCheckConfig) -> CheckReport {
    let cutoff = sc.cutoff();
    let span = sc.monomials(cutoff, cfg.max_factors);
    let nonunit: Vec<Monomial> = span.iter().filter(|m| !m.is_empty()).cloned().collect();
    let vl = &sc.c;

    let mut pairs = Vec::new();
    for u in &nonunit {
        for v in &nonunit {
            if degree(u) + degree(v) <= cutoff + 1 && u.len() + v.len() <= cfg.tuple_factors {
                pairs.push((u.clone(), v.clone()));
            }
        }
    }
    let pair_report = scan(MODULE, &pairs, |(um, vm), s| {
        let (u, v) = (ScElement::monomial(um.clone()), ScElement::monomial(vm.clone()));
        let (du, dv) = (degree(um), degree(vm));
        let (ul, vl_) = (deg_label(um, vl), deg_label(vm, vl));
        for n in 0..=du + dv {
            let nl = n.to_string();
            let t = [ul.as_str(), vl_.as_str(), nl.as_str()];
            let p = match sc.product(n, &u, &v) {
                Ok(p) => p,
                Err(e) => {
                    s.fail("cutoff", &t, e.to_string(), String::new());
                    continue;
                }
            };
            let ok = p.degrees().iter().all(|&d| d + n + 1 == du + dv);
            s.holds("grading", &t, ok, || sc.show(&p).to_string(), || format!("degree {}", du as i64 + dv as i64 - n as i64 - 1));

            let mut rhs = ScElement::zero();
            let mut err = None;
            for i in 0..=du + dv {
                match sc.product(n + i, &v, &u).and_then(|w| sc.d_pow(&w, i)) {
                    Ok(w) => rhs.axpy(&(sign(n + i + 1) / factorial(i)), &w),
                    Err(e) => err = Some(e),
                }
            }
            match err {
                None => s.eq("hs", &t, &Cmp(vl, p.clone()), &Cmp(vl, rhs)),
                Some(e) => s.fail("hs", &t, e.to_string(), String::new()),
            }

            let lower = if n == 0 {
                ScElement::zero()
            } else {
                sc.product(n - 1, &u, &v).unwrap().scaled(&-int(n as i64))
            };
            if du < cutoff && du + dv <= cutoff {
                let du_ = sc.d(&u).unwrap();
                let lhs = sc.product(n, &du_, &v).unwrap();
                s.eq("hp", &t, &Cmp(vl, lhs), &Cmp(vl, lower.clone()));
            }
            if du + dv <= cutoff && dv < cutoff {
                let lhs = sc.d(&p).unwrap().minus(&sc.product(n, &u, &sc.d(&v).unwrap()).unwrap());
                s.eq("hd-commutator", &t, &Cmp(vl, lhs), &Cmp(vl, lower));
            }
        }
        if um.len() == 1 && vm.len() == 1 {
            for n in 0..du + dv {
                let nl = n.to_string();
                let t = [ul.as_str(), vl_.as_str(), nl.as_str()];
                let step1 = sc.gen_act(n, um[0], &v);
                let step2 = sc.product_via_skew(n, um[0], vm[0]).unwrap();
                s.eq("uniqueness", &t, &Cmp(vl, step1), &Cmp(vl, step2));
            }
        }
    });

    let mut triples = Vec::new();
    for u in &nonunit {
        for v in &nonunit {
            for w in &nonunit {
                let deg = degree(u) + degree(v) + degree(w);
                if deg <= cutoff + 1 && u.len() + v.len() + w.len() <= cfg.tuple_factors {
                    triples.push((u.clone(), v.clone(), w.clone()));
                }
            }
        }
    }
    let triple_report = scan(MODULE, &triples, |(um, vm, wm), s: &mut Scan| {
        let (u, v, w) = (
            ScElement::monomial(um.clone()),
            ScElement::monomial(vm.clone()),
            ScElement::monomial(wm.clone()),
        );
        let labels = [deg_label(um, vl), deg_label(vm, vl), deg_label(wm, vl)];
        let total = degree(um) + degree(vm) + degree(wm);
        let vw = (degree(vm) + degree(wm) <= cutoff).then(|| sc.multiply(&v, &w).unwrap());
        for m in 0..total {
            let ml = m.to_string();
            let umw = sc.product(m, &u, &w).unwrap();
            if let Some(vw) = &vw {
                let t = [labels[0].as_str(), labels[1].as_str(), labels[2].as_str(), ml.as_str()];
                let lhs = sc.product(m, &u, vw).unwrap();
                let rhs = sc
                    .multiply(&sc.product(m, &u, &v).unwrap(), &w)
                    .unwrap()
                    .plus(&sc.multiply(&v, &umw).unwrap());
                s.eq("hd", &t, &Cmp(vl, lhs), &Cmp(vl, rhs));
            }
            for n in 0..total {
                let nl = n.to_string();
                let t = [labels[0].as_str(), labels[1].as_str(), labels[2].as_str(), ml.as_str(), nl.as_str()];
                let lhs = sc
                    .product(m, &u, &sc.product(n, &v, &w).unwrap())
                    .unwrap()
                    .minus(&sc.product(n, &v, &umw).unwrap());
                let mut rhs = ScElement::zero();
                for i in 0..=m {
                    let uv = sc.product(i, &u, &v).unwrap();
                    if uv.is_zero() {
                        continue;
                    }
                    rhs.axpy(&binomial(m, i), &sc.product(m + n - i, &uv, &w).unwrap());
                }
                s.eq("ha", &t, &Cmp(vl, lhs), &Cmp(vl, rhs));
            }
        }
    });

    let unit_items: Vec<Monomial> = span.clone();
    let unit_report = scan(MODULE, &unit_items, |um, s| {
        let u = ScElement::monomial(um.clone());
        let l = deg_label(um, vl);
        for n in 0..=cutoff + 1 {
            let nl = n.to_string();
            let t = [l.as_str(), nl.as_str()];
            let zero = Cmp(vl, ScElement::zero());
            s.eq("unit", &t, &Cmp(vl, sc.product(n, &u, &ScElement::one()).unwrap()), &zero);
            s.eq("unit", &t, &Cmp(vl, sc.product(n, &ScElement::one(), &u).unwrap()), &zero);
        }
        if degree(um) < cutoff {
            let d = sc.d(&u).unwrap();
            let ok = d.degrees().iter().all(|&x| x == degree(um) + 1);
            s.holds("grading", &[l.as_str(), "D"], ok, || sc.show(&d).to_string(), || format!("degree {}", degree(um) + 1));
        }
    });

    CheckReport::merge_all([pair_report, triple_report, unit_report])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::courant::{examples, to_1tca_unchecked};

    fn sc_of(x: &crate::courant::CourantAlgebroid, cutoff: usize) -> ScAlgebra {
        ScAlgebra::new(VertexLie::new(to_1tca_unchecked(x), cutoff))
    }

    fn b(n: usize, idx: usize) -> Gen {
        Gen::B { n, idx }
    }

    #[test]
    fn multiply_basics() {
        let sc = sc_of(&examples::exact(2).unwrap(), 4);
        let v = ScElement::gen(b(0, 1));
        assert_eq!(sc.multiply(&ScElement::one(), &v).unwrap(), v);
        let a = ScElement::gen(Gen::A(1));
        assert_eq!(sc.multiply(&a, &v).unwrap(), sc.multiply(&v, &a).unwrap());
        let db = ScElement::gen(b(1, 0));
        let sq = sc.multiply(&db, &db).unwrap();
        assert_eq!(sq, ScElement::monomial(vec![b(1, 0), b(1, 0)]));
        assert!(sc.multiply(&sq, &v).is_err());
    }

    #[test]
    fn d_is_a_derivation() {
        let x = examples::exact(2).unwrap();
        let sc = sc_of(&x, 4);
        assert!(sc.d(&ScElement::one()).unwrap().is_zero());
        let dx = x.b.index_of("dx").unwrap();
        let xdel = x.b.index_of("xdel").unwrap();
        // D(x · xdel) = (∂x)·xdel + x·D(xdel), with ∂x = dx.
        let u = ScElement::monomial(vec![Gen::A(1), b(0, xdel)]);
        let expect = ScElement::monomial(vec![b(0, dx), b(0, xdel)]).plus(&ScElement::monomial(vec![Gen::A(1), b(1, xdel)]));
        assert_eq!(sc.d(&u).unwrap(), expect);
        let bb = ScElement::monomial(vec![b(0, 0), b(0, 0)]);
        assert_eq!(sc.d(&bb).unwrap(), ScElement::monomial(vec![b(0, 0), b(1, 0)]).scaled(&int(2)));
    }

    #[test]
    fn unit_is_annihilated() {
        let sc = sc_of(&examples::heisenberg(), 4);
        let beta = ScElement::gen(b(0, 0));
        for n in 0..4 {
            assert!(sc.product(n, &beta, &ScElement::one()).unwrap().is_zero());
            assert!(sc.product(n, &ScElement::one(), &beta).unwrap().is_zero());
        }
    }

    #[test]
    fn heisenberg_derivation_example() {
        let sc = sc_of(&examples::heisenberg(), 4);
        let beta = ScElement::gen(b(0, 0));
        let bb = ScElement::monomial(vec![b(0, 0), b(0, 0)]);
        let expect = ScElement::monomial(vec![Gen::A(0), b(0, 0)]).scaled(&int(2));
        assert_eq!(sc.product(1, &beta, &bb).unwrap(), expect);
    }

    #[test]
    fn heisenberg_product_of_square_agrees_with_skew_flip() {
        let sc = sc_of(&examples::heisenberg(), 4);
        let beta = ScElement::gen(b(0, 0));
        let bb = ScElement::monomial(vec![b(0, 0), b(0, 0)]);
        let direct = sc.product(0, &bb, &beta).unwrap();
        let mut flip = ScElement::zero();
        for i in 0..4 {
            let w = sc.gen_act(i, b(0, 0), &bb);
            flip.axpy(&(sign(i + 1) / factorial(i)), &sc.d_pow(&w, i).unwrap());
        }
        assert_eq!(direct, flip);
        // Only j = 1 survives: D(beta_1 (beta beta)) = D(2 e beta) = 2 e D(beta), as D e = ∂e = 0.
        let expect = ScElement::monomial(vec![Gen::A(0), b(1, 0)]).scaled(&int(2));
        assert_eq!(direct, expect);
    }

    #[test]
    fn spanning_set_counts() {
        let sc = sc_of(&examples::heisenberg(), 2);
        // 1, e, e², beta, e·beta, Dbeta, beta², e·e·e, e·e·beta, e·Dbeta, e·beta², ...
        let ms = sc.monomials(2, 3);
        assert!(ms.iter().all(|m| degree(m) <= 2 && m.len() <= 3));
        assert!(ms.contains(&vec![]));
        let distinct: std::collections::BTreeSet<_> = ms.iter().cloned().collect();
        assert_eq!(distinct.len(), ms.len());
    }

    #[test]
    fn trivial_and_heisenberg_pass_small() {
        for x in [examples::trivial(2), examples::heisenberg()] {
            let r = check_vpa(&sc_of(&x, 3), VpaCheckConfig::default());
            assert!(r.passed(), "{r}");
        }
    }
}
