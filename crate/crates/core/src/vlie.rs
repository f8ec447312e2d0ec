//! The vertex Lie algebra `C = C(A ⊕ B) / ∂̂C(A)` attached to a 1-truncated
//! conformal algebra, in normal form.
//!
//! Degree 0 is `A`; degree `n ≥ 1` is spanned by `Dⁿ⁻¹b`. The relation
//! `Dᵏa = Dᵏ⁻¹(∂a)` is applied whenever `D` hits the `A` part, so no `Dᵏa`
//! with `k ≥ 1` is ever stored.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linear::{format_terms, Vector};
use crate::report::{scan, CheckReport, Scan};
use crate::scalar::{binomial, factorial, falling, int, sign, Scalar};
use crate::tca::OneTruncatedConformalAlgebra;

const MODULE: &str = "vlie";

/// A normal-form basis element of `C`: an `A` basis vector or `Dⁿb`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    A(usize),
    B { n: usize, idx: usize },
}

impl Gen {
    pub fn degree(self) -> usize {
        match self {
            Gen::A(_) => 0,
            Gen::B { n, .. } => n + 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CElement {
    pub a_part: Vector,
    /// `n ↦ v` stands for `Dⁿ(v)` with `v ∈ B`, in degree `n + 1`.
    pub b_parts: BTreeMap<usize, Vector>,
}

impl CElement {
    pub fn is_zero(&self) -> bool {
        self.a_part.is_zero() && self.b_parts.is_empty()
    }

    /// Highest degree carrying a nonzero component, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        match self.b_parts.keys().next_back() {
            Some(n) => Some(n + 1),
            None if !self.a_part.is_zero() => Some(0),
            None => None,
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut out = Vec::new();
        if !self.a_part.is_zero() {
            out.push(0);
        }
        out.extend(self.b_parts.keys().map(|n| n + 1));
        out
    }

    /// Expansion over normal-form basis elements.
    pub fn terms(&self) -> Vec<(Gen, Scalar)> {
        let mut out: Vec<(Gen, Scalar)> = self.a_part.iter().map(|(i, c)| (Gen::A(i), c.clone())).collect();
        for (&n, v) in &self.b_parts {
            out.extend(v.iter().map(|(idx, c)| (Gen::B { n, idx }, c.clone())));
        }
        out
    }

    pub fn axpy(&mut self, c: &Scalar, other: &CElement) {
        self.a_part.axpy(c, &other.a_part);
        for (&n, v) in &other.b_parts {
            self.add_b(n, c, v);
        }
    }

    fn add_b(&mut self, n: usize, c: &Scalar, v: &Vector) {
        if c.is_zero() || v.is_zero() {
            return;
        }
        let entry = self.b_parts.entry(n).or_insert_with(|| Vector::zero(v.space()));
        entry.axpy(c, v);
        if entry.is_zero() {
            self.b_parts.remove(&n);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> CElement {
        let mut out = CElement {
            a_part: Vector::zero(self.a_part.space()),
            b_parts: BTreeMap::new(),
        };
        out.axpy(c, self);
        out
    }

    pub fn plus(&self, o: &CElement) -> CElement {
        let mut out = self.clone();
        out.axpy(&Scalar::one(), o);
        out
    }

    pub fn minus(&self, o: &CElement) -> CElement {
        let mut out = self.clone();
        out.axpy(&-Scalar::one(), o);
        out
    }
}

pub fn gen_label(t: &OneTruncatedConformalAlgebra, g: Gen) -> String {
    match g {
        Gen::A(i) => t.c0.label(i).to_string(),
        Gen::B { n: 0, idx } => t.c1.label(idx).to_string(),
        Gen::B { n, idx } => format!("D{n}~{}", t.c1.label(idx)),
    }
}

/// `C` together with its degree cutoff.
#[derive(Clone, Debug)]
pub struct VertexLie {
    pub t: OneTruncatedConformalAlgebra,
    pub cutoff: usize,
    /// Nonzero products of basis elements within the cutoff.
    table: Arc<HashMap<(usize, Gen, Gen), CElement>>,
}

/// Display wrapper that resolves basis labels.
pub struct Shown<'a>(&'a VertexLie, &'a CElement);

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.1.terms();
        let s = format_terms(terms.iter().map(|(g, c)| (gen_label(&self.0.t, *g), c)));
        f.write_str(&s)
    }
}

#[derive(PartialEq)]
struct Cmp<'a>(&'a VertexLie, CElement);

impl fmt::Display for Cmp<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Shown(self.0, &self.1).fmt(f)
    }
}

impl PartialEq for VertexLie {
    fn eq(&self, other: &Self) -> bool {
        self.cutoff == other.cutoff && self.t == other.t
    }
}

impl VertexLie {
    pub fn new(t: OneTruncatedConformalAlgebra, cutoff: usize) -> VertexLie {
        let mut vl = VertexLie {
            t,
            cutoff,
            table: Arc::new(HashMap::new()),
        };
        let basis = vl.basis();
        let mut table = HashMap::new();
        for &x in &basis {
            for &y in &basis {
                for i in 0..x.degree() + y.degree() {
                    let p = vl.product_closed(i, x, y);
                    if !p.is_zero() {
                        table.insert((i, x, y), p);
                    }
                }
            }
        }
        vl.table = Arc::new(table);
        vl
    }

    fn in_range(&self, g: Gen) -> bool {
        g.degree() <= self.cutoff
    }

    pub fn zero(&self) -> CElement {
        CElement {
            a_part: Vector::zero(&self.t.c0),
            b_parts: BTreeMap::new(),
        }
    }

    pub fn gen(&self, g: Gen) -> CElement {
        let mut out = self.zero();
        match g {
            Gen::A(i) => out.a_part = Vector::basis(&self.t.c0, i),
            Gen::B { n, idx } => {
                out.b_parts.insert(n, Vector::basis(&self.t.c1, idx));
            }
        }
        out
    }

    pub fn show<'a>(&'a self, c: &'a CElement) -> Shown<'a> {
        Shown(self, c)
    }

    pub fn label(&self, g: Gen) -> String {
        gen_label(&self.t, g)
    }

    /// Normal-form basis of degree `n`.
    pub fn basis_of_degree(&self, n: usize) -> Vec<Gen> {
        if n == 0 {
            (0..self.t.c0.dim()).map(Gen::A).collect()
        } else {
            (0..self.t.c1.dim()).map(|idx| Gen::B { n: n - 1, idx }).collect()
        }
    }

    /// Normal-form basis up to the cutoff.
    pub fn basis(&self) -> Vec<Gen> {
        (0..=self.cutoff).flat_map(|n| self.basis_of_degree(n)).collect()
    }

    /// `Dᵏ` applied to an `A` vector, added into `out` with coefficient `c`.
    fn add_dk_a(&self, out: &mut CElement, k: usize, c: &Scalar, a: &Vector) {
        if k == 0 {
            out.a_part.axpy(c, a);
        } else {
            out.add_b(k - 1, c, &self.t.partial.eval(a));
        }
    }

    fn add_dk_b(&self, out: &mut CElement, k: usize, c: &Scalar, b: &Vector) {
        out.add_b(k, c, b);
    }

    /// `D^k` without the cutoff check.
    pub fn d_pow_unchecked(&self, c: &CElement, k: usize) -> CElement {
        if k == 0 {
            return c.clone();
        }
        let mut out = self.zero();
        self.add_dk_a(&mut out, k, &Scalar::one(), &c.a_part);
        for (&n, v) in &c.b_parts {
            self.add_dk_b(&mut out, n + k, &Scalar::one(), v);
        }
        out
    }

    pub fn d_op(&self, c: &CElement) -> Result<CElement> {
        self.d_pow(c, 1)
    }

    pub fn d_pow(&self, c: &CElement, k: usize) -> Result<CElement> {
        let out = self.d_pow_unchecked(c, k);
        match out.degree() {
            Some(d) if d > self.cutoff => Err(Error::CutoffExceeded {
                degree: d,
                cutoff: self.cutoff,
            }),
            _ => Ok(out),
        }
    }

    /// `b_j y` for `b ∈ B` a basis vector and `y` a normal-form basis element.
    fn b_prod(&self, out: &mut CElement, coef: &Scalar, j: usize, b: usize, y: Gen) {
        let t = &self.t;
        let bv = Vector::basis(&t.c1, b);
        match y {
            Gen::A(a) => {
                if j == 0 {
                    out.a_part.axpy(coef, &t.p0_10.eval(&bv, &Vector::basis(&t.c0, a)));
                }
            }
            Gen::B { n, idx } => {
                let b2 = Vector::basis(&t.c1, idx);
                if j <= n {
                    let c = coef * falling(n, j);
                    self.add_dk_b(out, n - j, &c, &t.p0_11.eval(&bv, &b2));
                }
                if j >= 1 && j <= n + 1 {
                    let c = coef * int(j as i64) * factorial(n) / factorial(n + 1 - j);
                    self.add_dk_a(out, n + 1 - j, &c, &t.p1_11.eval(&bv, &b2));
                }
            }
        }
    }

    /// `x_i y` on normal-form basis elements.
    pub fn product_gen(&self, i: usize, x: Gen, y: Gen) -> CElement {
        if self.in_range(x) && self.in_range(y) {
            return self.table.get(&(i, x, y)).cloned().unwrap_or_else(|| self.zero());
        }
        self.product_closed(i, x, y)
    }

    /// `x_i y` by the closed formulas.
    pub fn product_closed(&self, i: usize, x: Gen, y: Gen) -> CElement {
        let t = &self.t;
        let mut out = self.zero();
        match x {
            Gen::A(a) => {
                if let Gen::B { n, idx } = y {
                    if i <= n {
                        let ab = t.p0_01.eval(&Vector::basis(&t.c0, a), &Vector::basis(&t.c1, idx));
                        self.add_dk_a(&mut out, n - i, &falling(n, i), &ab);
                    }
                }
            }
            Gen::B { n: m, idx } => {
                if i >= m {
                    let c = sign(m) * falling(i, m);
                    self.b_prod(&mut out, &c, i - m, idx, y);
                }
            }
        }
        out
    }

    /// `u_i v`, extended bilinearly from the basis.
    pub fn product(&self, i: usize, u: &CElement, v: &CElement) -> CElement {
        let mut out = self.zero();
        let vt = v.terms();
        for (x, cx) in u.terms() {
            for (y, cy) in &vt {
                let p = self.product_gen(i, x, *y);
                out.axpy(&(&cx * cy), &p);
            }
        }
        out
    }

    /// Largest index `i` for which `x_i y` can be nonzero.
    pub fn max_index(&self, du: usize, dv: usize) -> Option<usize> {
        (du + dv).checked_sub(1)
    }

    pub fn dim(&self, n: usize) -> usize {
        self.basis_of_degree(n).len()
    }
}

/// A Laurent polynomial in `x` with coefficients in `C`, finitely supported.
#[derive(Clone, Debug)]
struct Laurent {
    terms: BTreeMap<i64, CElement>,
}

impl Laurent {
    fn new() -> Laurent {
        Laurent { terms: BTreeMap::new() }
    }

    fn add(&mut self, vl: &VertexLie, k: i64, c: &Scalar, v: &CElement) {
        if c.is_zero() || v.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(|| vl.zero());
        e.axpy(c, v);
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    fn derivative(&self, vl: &VertexLie) -> Laurent {
        let mut out = Laurent::new();
        for (&k, v) in &self.terms {
            out.add(vl, k - 1, &int(k), v);
        }
        out
    }

    fn reflect(&self, vl: &VertexLie) -> Laurent {
        let mut out = Laurent::new();
        for (&k, v) in &self.terms {
            let s = if k.rem_euclid(2) == 0 { int(1) } else { int(-1) };
            out.add(vl, k, &s, v);
        }
        out
    }

    /// `Sing(e^{xD} self)`.
    fn sing_exp_d(&self, vl: &VertexLie) -> Laurent {
        let mut out = Laurent::new();
        for (&k, v) in &self.terms {
            if k >= 0 {
                continue;
            }
            // x^j D^j / j! against x^k stays singular for j < -k.
            for j in 0..(-k) as usize {
                let dv = vl.d_pow_unchecked(v, j);
                out.add(vl, k + j as i64, &(Scalar::one() / factorial(j)), &dv);
            }
        }
        out
    }

    fn coeff(&self, vl: &VertexLie, k: i64) -> CElement {
        self.terms.get(&k).cloned().unwrap_or_else(|| vl.zero())
    }
}

fn base_series(vl: &VertexLie, v: Gen, u: Gen) -> Laurent {
    // Generating series of the products of two undifferentiated generators.
    let t = &vl.t;
    let mut out = Laurent::new();
    let one = Scalar::one();
    match (v, u) {
        (Gen::A(a), Gen::B { n: 0, idx }) => {
            let mut c = vl.zero();
            c.a_part = t.p0_01.eval(&Vector::basis(&t.c0, a), &Vector::basis(&t.c1, idx));
            out.add(vl, -1, &one, &c);
        }
        (Gen::B { n: 0, idx }, Gen::A(a)) => {
            let mut c = vl.zero();
            c.a_part = t.p0_10.eval(&Vector::basis(&t.c1, idx), &Vector::basis(&t.c0, a));
            out.add(vl, -1, &one, &c);
        }
        (Gen::B { n: 0, idx: i }, Gen::B { n: 0, idx: j }) => {
            let (bi, bj) = (Vector::basis(&t.c1, i), Vector::basis(&t.c1, j));
            let mut c0 = vl.zero();
            c0.b_parts.insert(0, t.p0_11.eval(&bi, &bj));
            c0.b_parts.retain(|_, v| !v.is_zero());
            let mut c1 = vl.zero();
            c1.a_part = t.p1_11.eval(&bi, &bj);
            out.add(vl, -1, &one, &c0);
            out.add(vl, -2, &one, &c1);
        }
        _ => {}
    }
    out
}

/// `Y(v, x) Dᵐ u` for generators `u, v`, from the generator series and the
/// translation rule `Y(v,x)Dᵐu = Σ_k C(m,k) (-1)^{m-k} Dᵏ (d/dx)^{m-k} Y(v,x)u`.
fn series_on_derivative(vl: &VertexLie, v: Gen, m: usize, u: Gen) -> Laurent {
    let base = base_series(vl, v, u);
    let mut derivs = vec![base];
    for _ in 0..m {
        let next = derivs.last().unwrap().derivative(vl);
        derivs.push(next);
    }
    let mut out = Laurent::new();
    for k in 0..=m {
        let c = binomial(m, k) * sign(m - k);
        for (&e, coef) in &derivs[m - k].terms {
            out.add(vl, e, &c, &vl.d_pow_unchecked(coef, k));
        }
    }
    out
}

/// `(Dⁿu)_i (Dᵐv)` for generators `u, v ∈ A ⊕ B`, computed as the
/// coefficient of `x^{-i-1}` in `Sing(e^{xD} (-d/dx)ᵐ Y(v, -x) Dⁿu)`.
/// It shares no code with the closed formulas used by [`VertexLie::product`].
pub fn sing_oracle(vl: &VertexLie, m: usize, u: Gen, v: Gen, n: usize, i: usize) -> Result<CElement> {
    let (Gen::A(_) | Gen::B { n: 0, .. }) = u else {
        return Err(Error::Structure("sing_oracle takes undifferentiated generators".into()));
    };
    let (Gen::A(_) | Gen::B { n: 0, .. }) = v else {
        return Err(Error::Structure("sing_oracle takes undifferentiated generators".into()));
    };
    let du = u.degree() + n;
    let dv = v.degree() + m;
    if du > vl.cutoff || dv > vl.cutoff {
        return Err(Error::CutoffExceeded {
            degree: du.max(dv),
            cutoff: vl.cutoff,
        });
    }
    let mut s = series_on_derivative(vl, v, n, u).reflect(vl);
    for _ in 0..m {
        s = s.derivative(vl).reflect_sign();
    }
    let s = s.sing_exp_d(vl);
    Ok(s.coeff(vl, -(i as i64) - 1))
}

impl Laurent {
    fn reflect_sign(self) -> Laurent {
        let mut out = self;
        for v in out.terms.values_mut() {
            *v = v.scaled(&-Scalar::one());
        }
        out
    }
}

/// `Dᵐg` as a normal-form element, for a generator `g`.
pub fn d_gen(vl: &VertexLie, g: Gen, m: usize) -> CElement {
    vl.d_pow_unchecked(&vl.gen(g), m)
}

fn pairs_with_total(vl: &VertexLie, bound: usize) -> Vec<(Gen, Gen)> {
    let basis = vl.basis();
    let mut out = Vec::new();
    for &x in &basis {
        for &y in &basis {
            if x.degree() + y.degree() <= bound {
                out.push((x, y));
            }
        }
    }
    out
}

fn triples_with_total(vl: &VertexLie, bound: usize) -> Vec<(Gen, Gen, Gen)> {
    let basis = vl.basis();
    let mut out = Vec::new();
    for &x in &basis {
        for &y in &basis {
            for &z in &basis {
                if x.degree() + y.degree() + z.degree() <= bound {
                    out.push((x, y, z));
                }
            }
        }
    }
    out
}

/// `(Du)_n v = -n u_{n-1} v`, skew symmetry, grading, and `[D, u_i] = -i u_{i-1}`.
pub fn check_pairs(vl: &VertexLie) -> CheckReport {
    let items = pairs_with_total(vl, vl.cutoff + 1);
    scan(MODULE, &items, |&(x, y), s| {
        let (u, v) = (vl.gen(x), vl.gen(y));
        let (du, dv) = (x.degree(), y.degree());
        let (xl, yl) = (vl.label(x), vl.label(y));
        let top = du + dv + 1;
        for n in 0..=top {
            let nl = n.to_string();
            let tuple = [xl.as_str(), yl.as_str(), nl.as_str()];
            let p = vl.product(n, &u, &v);
            // grading
            let ok = p.degrees().iter().all(|&d| d + n + 1 == du + dv);
            s.holds("grading", &tuple, ok, || vl.show(&p).to_string(), || format!("degree {}", (du + dv) as i64 - n as i64 - 1));
            // skew symmetry
            let mut rhs = vl.zero();
            for i in 0..=top {
                let c = sign(n + i + 1) / factorial(i);
                let w = vl.product(n + i, &v, &u);
                if w.is_zero() {
                    continue;
                }
                match vl.d_pow(&w, i) {
                    Ok(dw) => rhs.axpy(&c, &dw),
                    Err(e) => {
                        s.fail("hs", &tuple, e.to_string(), String::new());
                    }
                }
            }
            s.eq("hs", &tuple, &Cmp(vl, p.clone()), &Cmp(vl, rhs));
            if du < vl.cutoff {
                let lhs = vl.product(n, &vl.d_op(&u).unwrap(), &v);
                let rhs = if n == 0 {
                    vl.zero()
                } else {
                    vl.product(n - 1, &u, &v).scaled(&-int(n as i64))
                };
                s.eq("hp", &tuple, &Cmp(vl, lhs), &Cmp(vl, rhs));
            }
            if du + dv <= vl.cutoff && dv < vl.cutoff {
                let lhs = vl.d_op(&p).unwrap().minus(&vl.product(n, &u, &vl.d_op(&v).unwrap()));
                let rhs = if n == 0 {
                    vl.zero()
                } else {
                    vl.product(n - 1, &u, &v).scaled(&-int(n as i64))
                };
                s.eq("hd-commutator", &tuple, &Cmp(vl, lhs), &Cmp(vl, rhs));
            }
        }
    })
}

/// `u_m v_n w - v_n u_m w = Σ_i C(m,i) (u_i v)_{m+n-i} w`.
pub fn check_half_commutator(vl: &VertexLie) -> CheckReport {
    let items = triples_with_total(vl, vl.cutoff + 1);
    scan(MODULE, &items, |&(x, y, z), s: &mut Scan| {
        let (u, v, w) = (vl.gen(x), vl.gen(y), vl.gen(z));
        let (du, dv, dw) = (x.degree(), y.degree(), z.degree());
        let labels = [vl.label(x), vl.label(y), vl.label(z)];
        let total = du + dv + dw;
        for m in 0..total {
            let umw = vl.product(m, &u, &w);
            for n in 0..total {
                let ml = m.to_string();
                let nl = n.to_string();
                let tuple = [labels[0].as_str(), labels[1].as_str(), labels[2].as_str(), ml.as_str(), nl.as_str()];
                let lhs = vl
                    .product(m, &u, &vl.product(n, &v, &w))
                    .minus(&vl.product(n, &v, &umw));
                let mut rhs = vl.zero();
                for i in 0..=m {
                    let uv = vl.product(i, &u, &v);
                    if uv.is_zero() {
                        continue;
                    }
                    rhs.axpy(&binomial(m, i), &vl.product(m + n - i, &uv, &w));
                }
                s.eq("ha", &tuple, &Cmp(vl, lhs), &Cmp(vl, rhs));
            }
        }
    })
}

/// Closed formulas against the Laurent-series oracle on all generator
/// pairs, derivative orders and indices within the cutoff.
pub fn check_oracle(vl: &VertexLie) -> CheckReport {
    let gens: Vec<Gen> = vl.basis_of_degree(0).into_iter().chain(vl.basis_of_degree(1)).collect();
    let mut items = Vec::new();
    for &u in &gens {
        for &v in &gens {
            for m in 0..=vl.cutoff.saturating_sub(u.degree()) {
                for n in 0..=vl.cutoff.saturating_sub(v.degree()) {
                    items.push((u, m, v, n));
                }
            }
        }
    }
    scan(MODULE, &items, |&(u, m, v, n), s| {
        let x = d_gen(vl, u, m);
        let y = d_gen(vl, v, n);
        let top = u.degree() + m + v.degree() + n + 1;
        for i in 0..=top {
            let closed = vl.product(i, &x, &y);
            let oracle = sing_oracle(vl, n, u, v, m, i).expect("within cutoff");
            let tuple = [vl.label(u), m.to_string(), vl.label(v), n.to_string(), i.to_string()];
            let tr: Vec<&str> = tuple.iter().map(|s| s.as_str()).collect();
            s.eq("oracle", &tr, &Cmp(vl, closed), &Cmp(vl, oracle));
        }
    })
}

/// Dimensions of the graded pieces against `dim A` and `dim B`.
pub fn check_dims(vl: &VertexLie) -> CheckReport {
    let mut s = Scan::new(MODULE);
    s.eq("dim", &["0"], &vl.dim(0), &vl.t.c0.dim());
    for n in 1..=vl.cutoff {
        s.eq("dim", &[&n.to_string()], &vl.dim(n), &vl.t.c1.dim());
    }
    s.finish()
}

pub fn check_vertex_lie(vl: &VertexLie) -> CheckReport {
    CheckReport::merge_all([
        check_dims(vl),
        check_pairs(vl),
        check_half_commutator(vl),
        check_oracle(vl),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::courant::{examples, to_1tca_unchecked};

    fn heis(cutoff: usize) -> VertexLie {
        VertexLie::new(to_1tca_unchecked(&examples::heisenberg()), cutoff)
    }

    fn e(vl: &VertexLie) -> CElement {
        vl.gen(Gen::A(0))
    }

    #[test]
    fn d_op_cases() {
        let x = examples::exact(2).unwrap();
        let vl = VertexLie::new(to_1tca_unchecked(&x), 4);
        let xa = vl.gen(Gen::A(1));
        let dx = vl.d_op(&xa).unwrap();
        assert_eq!(dx, vl.gen(Gen::B { n: 0, idx: x.b.index_of("dx").unwrap() }));
        let d2b = vl.gen(Gen::B { n: 2, idx: 0 });
        assert_eq!(vl.d_op(&d2b).unwrap(), vl.gen(Gen::B { n: 3, idx: 0 }));
        assert!(vl.d_op(&vl.gen(Gen::B { n: 3, idx: 0 })).is_err());
        let sl2 = VertexLie::new(to_1tca_unchecked(&examples::quadratic_lie_sl2()), 4);
        assert!(sl2.d_op(&sl2.gen(Gen::A(0))).unwrap().is_zero());
    }

    #[test]
    fn heisenberg_products() {
        let vl = heis(4);
        let beta = vl.gen(Gen::B { n: 0, idx: 0 });
        let dbeta = vl.gen(Gen::B { n: 1, idx: 0 });
        assert_eq!(vl.product(1, &beta, &beta), e(&vl));
        assert_eq!(vl.product(2, &dbeta, &beta), e(&vl).scaled(&int(-2)));
        assert!(vl.product(1, &dbeta, &beta).is_zero());
        let b = Gen::B { n: 0, idx: 0 };
        assert_eq!(sing_oracle(&vl, 0, b, b, 1, 2).unwrap(), e(&vl).scaled(&int(-2)));
        assert_eq!(sing_oracle(&vl, 1, b, b, 0, 2).unwrap(), e(&vl).scaled(&int(2)));
    }

    #[test]
    fn a_on_db_matches_formula() {
        let x = examples::exact(3).unwrap();
        let vl = VertexLie::new(to_1tca_unchecked(&x), 4);
        for a in 0..x.a.space.dim() {
            for b in 0..x.b.dim() {
                let ab = vl.t.p0_01.eval(&Vector::basis(&vl.t.c0, a), &Vector::basis(&vl.t.c1, b));
                let p1 = vl.product_gen(1, Gen::A(a), Gen::B { n: 1, idx: b });
                assert_eq!(p1.a_part, ab);
                assert!(p1.b_parts.is_empty());
                let p0 = vl.product_gen(0, Gen::A(a), Gen::B { n: 1, idx: b });
                let mut expect = vl.zero();
                expect.b_parts.insert(0, vl.t.partial.eval(&ab));
                expect.b_parts.retain(|_, v| !v.is_zero());
                assert_eq!(p0, expect);
                let oracle = sing_oracle(&vl, 1, Gen::A(a), Gen::B { n: 0, idx: b }, 0, 1).unwrap();
                assert_eq!(oracle, p1);
            }
        }
    }

    #[test]
    fn zero_products_give_zero_oracle() {
        let vl = VertexLie::new(to_1tca_unchecked(&examples::trivial(2)), 3);
        for i in 0..5 {
            let o = sing_oracle(&vl, 1, Gen::B { n: 0, idx: 0 }, Gen::B { n: 0, idx: 0 }, 0, i).unwrap();
            assert!(o.is_zero());
        }
    }

    #[test]
    fn hp_spot_identity() {
        let vl = heis(4);
        let beta = vl.gen(Gen::B { n: 0, idx: 0 });
        let dbeta = vl.d_op(&beta).unwrap();
        assert_eq!(vl.product(2, &dbeta, &beta), vl.product(1, &beta, &beta).scaled(&int(-2)));
    }

    #[test]
    fn examples_pass_at_cutoff_3() {
        for (name, x) in examples::acceptance_set() {
            let vl = VertexLie::new(to_1tca_unchecked(&x), 3);
            let r = check_vertex_lie(&vl);
            assert!(r.passed(), "{name}: {r}");
        }
    }

    #[test]
    fn dims_match() {
        let x = examples::exact(3).unwrap();
        let vl = VertexLie::new(to_1tca_unchecked(&x), 4);
        assert_eq!(vl.dim(0), 3);
        for n in 1..=4 {
            assert_eq!(vl.dim(n), 4);
        }
    }
}
