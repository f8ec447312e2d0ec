//! The quotient `S(C)_B = S(C) / I_B`, where `I_B` is generated under `D` and
//! multiplication by `e - 1`, `a·a' - aa'` and `a·b - ab`.
//!
//! Reduction first rewrites every monomial until it is either a single `A`
//! generator or a product of `Dⁿb` generators. Those pure-`B` monomials are
//! not independent modulo `I_B` in general (for `A = Q[x]/(x²)`, `dx·dx·dx`
//! lies in `I_B`), so the rewritten element is then projected canonically
//! modulo the image `K_n` of `(I_B)_n`, computed degree by degree.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::courant::{self, to_1tca, CourantAlgebroid, UnitalCommAlgebra};
use crate::error::{Error, Result};
use crate::linear::{format_terms, BilinearMap, LinearMap, RowEchelon, Vector};
use crate::report::{scan, CheckReport, Scan};
use crate::scalar::{binomial, ratio, Scalar};
use crate::vlie::{Gen, VertexLie};
use crate::vpa::{degree, mono_label, mono_mul, without, Monomial, ScAlgebra, ScElement};

const MODULE: &str = "quotient";

/// Normal form: an `A` part in degree 0 plus pure-`B` monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SbElement {
    pub a_part: Vector,
    pub monomial_part: BTreeMap<Monomial, Scalar>,
}

impl SbElement {
    pub fn is_zero(&self) -> bool {
        self.a_part.is_zero() && self.monomial_part.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.monomial_part.keys().map(|m| degree(m)).collect();
        if !self.a_part.is_zero() {
            d.push(0);
        }
        d.sort();
        d.dedup();
        d
    }

    /// Reads a degree-1 element as a vector of `B`.
    pub fn as_b_vector(&self, b: &crate::linear::BasedSpace) -> Result<Vector> {
        if !self.a_part.is_zero() {
            return Err(Error::Structure("expected a degree-1 element".into()));
        }
        let mut v = Vector::zero(b);
        for (m, c) in &self.monomial_part {
            match m.as_slice() {
                [Gen::B { n: 0, idx }] => v.add_coeff(*idx, c),
                _ => return Err(Error::Structure("expected a degree-1 element".into())),
            }
        }
        Ok(v)
    }

    pub fn as_a_vector(&self) -> Result<Vector> {
        if !self.monomial_part.is_empty() {
            return Err(Error::Structure("expected a degree-0 element".into()));
        }
        Ok(self.a_part.clone())
    }
}

/// The two admissible rewrite orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Fuse all `A` factors first, then fuse with the first `B` factor.
    Leftmost,
    /// Fuse the last `A` factor with the last `B` factor first.
    Rightmost,
}

#[derive(Clone, Debug)]
pub struct IdealGenerators {
    pub e0: Vec<(String, ScElement)>,
    pub e1: Vec<(String, ScElement)>,
}

impl IdealGenerators {
    pub fn all(&self) -> impl Iterator<Item = &(String, ScElement)> {
        self.e0.iter().chain(self.e1.iter())
    }
}

#[derive(Debug)]
pub struct SbAlgebra {
    pub x: CourantAlgebroid,
    pub sc: ScAlgebra,
    relations: Vec<OnceLock<RowEchelon<Monomial>>>,
    unit_gen: Option<usize>,
}

pub struct ShownSb<'a>(&'a SbAlgebra, &'a SbElement);

impl fmt::Display for ShownSb<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vl = &self.0.sc.c;
        let mut terms: Vec<(String, Scalar)> = self
            .1
            .a_part
            .iter()
            .map(|(i, c)| (vl.label(Gen::A(i)), c.clone()))
            .collect();
        terms.extend(self.1.monomial_part.iter().map(|(m, c)| (mono_label(vl, m), c.clone())));
        f.write_str(&format_terms(terms.iter().map(|(l, c)| (l.clone(), c))))
    }
}

struct Cmp<'a>(&'a SbAlgebra, SbElement);

impl PartialEq for Cmp<'_> {
    fn eq(&self, o: &Self) -> bool {
        self.1 == o.1
    }
}

impl fmt::Display for Cmp<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        ShownSb(self.0, &self.1).fmt(f)
    }
}

fn is_a(g: &Gen) -> bool {
    matches!(g, Gen::A(_))
}

impl SbAlgebra {
    /// Builds the pipeline `X → 1TCA → C → S(C) → S(C)_B` at the given cutoff.
    pub fn new(x: &CourantAlgebroid, cutoff: usize) -> Result<SbAlgebra> {
        let t = to_1tca(x)?;
        let sc = ScAlgebra::new(VertexLie::new(t, cutoff));
        let unit = &x.a.unit;
        let unit_gen = match unit.iter().collect::<Vec<_>>().as_slice() {
            [(i, c)] if c.is_one() => Some(*i),
            _ => None,
        };
        Ok(SbAlgebra {
            x: x.clone(),
            sc,
            relations: (0..=cutoff).map(|_| OnceLock::new()).collect(),
            unit_gen,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.sc.cutoff()
    }

    pub fn vl(&self) -> &VertexLie {
        &self.sc.c
    }

    pub fn show<'a>(&'a self, u: &'a SbElement) -> ShownSb<'a> {
        ShownSb(self, u)
    }

    fn a_basis(&self) -> usize {
        self.x.a.space.dim()
    }

    fn b_basis(&self) -> usize {
        self.x.b.dim()
    }

    pub fn generators(&self) -> IdealGenerators {
        let na = self.a_basis();
        let nb = self.b_basis();
        let lab = |g: Gen| self.vl().label(g);
        let from_a = |v: &Vector| {
            let mut s = ScElement::zero();
            for (i, c) in v.iter() {
                s.add_term(vec![Gen::A(i)], c);
            }
            s
        };
        let from_b = |v: &Vector| {
            let mut s = ScElement::zero();
            for (i, c) in v.iter() {
                s.add_term(vec![Gen::B { n: 0, idx: i }], c);
            }
            s
        };
        let mut e0 = vec![("e-1".to_string(), from_a(&self.x.a.unit).minus(&ScElement::one()))];
        for i in 0..na {
            for j in i..na {
                let prod = ScElement::monomial(vec![Gen::A(i), Gen::A(j)]);
                let aa = self.x.a.mul(&Vector::basis(&self.x.a.space, i), &Vector::basis(&self.x.a.space, j));
                e0.push((format!("{}.{}", lab(Gen::A(i)), lab(Gen::A(j))), prod.minus(&from_a(&aa))));
            }
        }
        let mut e1 = Vec::new();
        for i in 0..na {
            for j in 0..nb {
                let g = Gen::B { n: 0, idx: j };
                let prod = ScElement::monomial(vec![Gen::A(i), g]);
                let ab = self.x.act(&Vector::basis(&self.x.a.space, i), &Vector::basis(&self.x.b, j));
                e1.push((format!("{}.{}", lab(Gen::A(i)), lab(g)), prod.minus(&from_b(&ab))));
            }
        }
        IdealGenerators { e0, e1 }
    }

    fn push_a(&self, out: &mut ScElement, rest: &[Gen], coef: &Scalar, v: &Vector) {
        for (i, c) in v.iter() {
            out.add_term(mono_mul(rest, &[Gen::A(i)]), &(coef * c));
        }
    }

    /// One rewrite step on a monomial that still has an `A` factor (or is
    /// `1`). Returns the replacement.
    fn step(&self, m: &[Gen], strategy: Strategy) -> ScElement {
        let mut out = ScElement::zero();
        let one = Scalar::one();
        if m.is_empty() {
            // 1 ≡ e
            self.push_a(&mut out, &[], &one, &self.x.a.unit);
            return out;
        }
        let na = m.iter().filter(|g| is_a(g)).count();
        let nb = m.len() - na;
        if let Some(u) = self.unit_gen {
            if m.len() > 1 {
                if let Some(pos) = m.iter().position(|g| *g == Gen::A(u)) {
                    out.add_term(without(m, pos), &one);
                    return out;
                }
            }
        }
        let sa = &self.x.a.space;
        let fuse_aa = |p: usize, q: usize, out: &mut ScElement| {
            let (Gen::A(i), Gen::A(j)) = (m[p], m[q]) else { unreachable!() };
            let prod = self.x.a.mul(&Vector::basis(sa, i), &Vector::basis(sa, j));
            let rest = without(&without(m, q), p);
            self.push_a(out, &rest, &one, &prod);
        };
        let use_aa = match strategy {
            Strategy::Leftmost => na >= 2,
            Strategy::Rightmost => na >= 2 && nb == 0,
        };
        if use_aa {
            match strategy {
                Strategy::Leftmost => fuse_aa(0, 1, &mut out),
                Strategy::Rightmost => fuse_aa(na - 2, na - 1, &mut out),
            }
            return out;
        }
        let a_pos = match strategy {
            Strategy::Leftmost => 0,
            Strategy::Rightmost => na - 1,
        };
        let b_pos = match strategy {
            Strategy::Leftmost => na,
            Strategy::Rightmost => m.len() - 1,
        };
        let (Gen::A(ai), Gen::B { n, idx }) = (m[a_pos], m[b_pos]) else {
            unreachable!("step called on a finished monomial")
        };
        let rest = without(&without(m, b_pos), a_pos);
        let a = Vector::basis(sa, ai);
        let ab = self.x.act(&a, &Vector::basis(&self.x.b, idx));
        for (k, c) in ab.iter() {
            out.add_term(mono_mul(&rest, &[Gen::B { n, idx: k }]), c);
        }
        if n >= 1 {
            let da = self.x.d(&a);
            for i in 1..=n {
                let c = -binomial(n, i);
                for (k, w) in da.iter() {
                    let pair = [Gen::B { n: n - i, idx }, Gen::B { n: i - 1, idx: k }];
                    let mut pair = pair.to_vec();
                    pair.sort();
                    out.add_term(mono_mul(&rest, &pair), &(&c * w));
                }
            }
        }
        out
    }

    fn finished(&self, m: &[Gen]) -> bool {
        let na = m.iter().filter(|g| is_a(g)).count();
        !m.is_empty() && (na == 0 || (na == 1 && m.len() == 1))
    }

    /// Rewrites until every monomial is a single `A` generator or pure `B`.
    pub fn rewrite(&self, u: &ScElement, strategy: Strategy) -> Result<ScElement> {
        let factors: usize = u.terms.keys().map(|m| m.len() + 1).sum();
        let bound = 64 * (factors + 1);
        let mut steps = 0;
        let mut done = ScElement::zero();
        let mut pending = u.clone();
        while let Some((m, c)) = pending.terms.pop_first() {
            if self.finished(&m) {
                done.add_term(m, &c);
                continue;
            }
            steps += 1;
            if steps > bound {
                return Err(Error::RewriteBound(bound));
            }
            let r = self.step(&m, strategy);
            pending.axpy(&c, &r);
        }
        Ok(done)
    }

    /// The relation space `K_n`: images under rewriting of `M · Dᵏ(g)` with
    /// `M` a pure-`B` monomial, optionally times one `A` generator, and `g`
    /// an ideal generator, of total degree `n`.
    pub fn relations(&self, n: usize) -> Result<&RowEchelon<Monomial>> {
        if n > self.cutoff() {
            return Err(Error::CutoffExceeded {
                degree: n,
                cutoff: self.cutoff(),
            });
        }
        if let Some(r) = self.relations[n].get() {
            return Ok(r);
        }
        let ech = self.compute_relations(n)?;
        Ok(self.relations[n].get_or_init(|| ech))
    }

    pub(crate) fn pure_b_monomials(&self, d: usize) -> Vec<Monomial> {
        self.sc
            .monomials(d, d.max(1))
            .into_iter()
            .filter(|m| degree(m) == d && !m.iter().any(is_a))
            .collect()
    }

    fn compute_relations(&self, n: usize) -> Result<RowEchelon<Monomial>> {
        let gens = self.generators();
        let mut items: Vec<(Monomial, ScElement)> = Vec::new();
        for (_, g) in gens.e0.iter() {
            for k in 0..=n {
                items.push((Vec::new(), self.sc.d_pow(g, k)?));
            }
        }
        for (_, g) in gens.e1.iter() {
            for k in 0..n {
                items.push((Vec::new(), self.sc.d_pow(g, k)?));
            }
        }
        let mut prefixes: Vec<(usize, Monomial)> = Vec::new();
        for d in 0..=n {
            for m in self.pure_b_monomials(d) {
                prefixes.push((d, m.clone()));
                for i in 0..self.a_basis() {
                    prefixes.push((d, mono_mul(&m, &[Gen::A(i)])));
                }
            }
        }
        let mut rows = Vec::new();
        for (_, dg) in &items {
            let Some(gd) = dg.max_degree() else { continue };
            for (d, p) in &prefixes {
                if d + gd != n {
                    continue;
                }
                let x = self.sc.multiply(&ScElement::monomial(p.clone()), dg)?;
                rows.push(x);
            }
        }
        let images = crate::par::map(&rows, |x| self.rewrite(x, Strategy::Leftmost));
        let mut ech = RowEchelon::new();
        for img in images {
            ech.insert(&img?.terms);
        }
        Ok(ech)
    }

    fn to_sb(&self, x: ScElement) -> SbElement {
        let mut a_part = Vector::zero(&self.x.a.space);
        let mut monomial_part = BTreeMap::new();
        for (m, c) in x.terms {
            match m.as_slice() {
                [Gen::A(i)] => a_part.add_coeff(*i, &c),
                _ => {
                    monomial_part.insert(m, c);
                }
            }
        }
        SbElement { a_part, monomial_part }
    }

    /// Canonical projection of a rewritten element modulo the relations.
    fn canonical(&self, x: ScElement) -> Result<ScElement> {
        let mut by_degree: BTreeMap<usize, BTreeMap<Monomial, Scalar>> = BTreeMap::new();
        for (m, c) in x.terms {
            by_degree.entry(degree(&m)).or_default().insert(m, c);
        }
        let mut out = ScElement::zero();
        for (d, row) in by_degree {
            let reduced = self.relations(d)?.reduce(&row);
            for (m, c) in reduced {
                out.add_term(m, &c);
            }
        }
        Ok(out)
    }

    pub fn reduce_with(&self, u: &ScElement, strategy: Strategy) -> Result<SbElement> {
        let r = self.rewrite(u, strategy)?;
        Ok(self.to_sb(self.canonical(r)?))
    }

    pub fn reduce(&self, u: &ScElement) -> Result<SbElement> {
        self.reduce_with(u, Strategy::Leftmost)
    }

    pub fn lift(&self, u: &SbElement) -> ScElement {
        let mut out = ScElement::zero();
        for (i, c) in u.a_part.iter() {
            out.add_term(vec![Gen::A(i)], c);
        }
        for (m, c) in &u.monomial_part {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn a_elem(&self, a: &Vector) -> SbElement {
        SbElement {
            a_part: a.clone(),
            monomial_part: BTreeMap::new(),
        }
    }

    pub fn b_elem(&self, b: &Vector) -> SbElement {
        SbElement {
            a_part: Vector::zero(&self.x.a.space),
            monomial_part: b.iter().map(|(i, c)| (vec![Gen::B { n: 0, idx: i }], c.clone())).collect(),
        }
    }

    pub fn sb_multiply(&self, u: &SbElement, v: &SbElement) -> Result<SbElement> {
        self.reduce(&self.sc.multiply(&self.lift(u), &self.lift(v))?)
    }

    pub fn sb_d(&self, u: &SbElement) -> Result<SbElement> {
        self.reduce(&self.sc.d(&self.lift(u))?)
    }

    pub fn sb_product(&self, n: usize, u: &SbElement, v: &SbElement) -> Result<SbElement> {
        self.reduce(&self.sc.product(n, &self.lift(u), &self.lift(v))?)
    }

    /// Dimension of `(S(C)_B)_n`, as the rank of the rewritten images of all
    /// degree-`n` monomials with at most three factors, minus `dim K_n`.
    pub fn dim(&self, n: usize) -> Result<usize> {
        let span: Vec<ScElement> = self
            .sc
            .monomials(n, 3)
            .into_iter()
            .filter(|m| degree(m) == n)
            .map(ScElement::monomial)
            .collect();
        let mut ech = RowEchelon::<Monomial>::new();
        for s in &span {
            ech.insert(&self.rewrite(s, Strategy::Leftmost)?.terms);
        }
        Ok(ech.rank() - self.relations(n)?.rank())
    }
}

/// Reads the algebroid structure back off degrees 0 and 1 of the quotient,
/// identifying `A` and `B` with their images under the inclusion.
pub fn extract_degree01(q: &SbAlgebra) -> Result<(UnitalCommAlgebra, CourantAlgebroid)> {
    let sa = q.x.a.space.clone();
    let sb = q.x.b.clone();
    let (na, nb) = (sa.dim(), sb.dim());
    let ea = |i: usize| q.a_elem(&Vector::basis(&sa, i));
    let eb = |i: usize| q.b_elem(&Vector::basis(&sb, i));

    let mut mult = BilinearMap::zero(&sa, &sa, &sa);
    for i in 0..na {
        for j in 0..na {
            mult.set(i, j, q.sb_multiply(&ea(i), &ea(j))?.as_a_vector()?);
        }
    }
    mult.set_symmetric_flag(q.x.a.mult.symmetric());
    let unit = q.reduce(&ScElement::one())?.as_a_vector()?;
    let algebra = UnitalCommAlgebra {
        space: sa.clone(),
        mult,
        unit,
    };

    let mut action = BilinearMap::zero(&sa, &sb, &sb);
    let mut anchor = BilinearMap::zero(&sb, &sa, &sa);
    let mut partial = LinearMap::zero(&sa, &sb);
    for i in 0..na {
        for j in 0..nb {
            action.set(i, j, q.sb_multiply(&ea(i), &eb(j))?.as_b_vector(&sb)?);
            anchor.set(j, i, q.sb_product(0, &eb(j), &ea(i))?.as_a_vector()?);
        }
        partial.set_column(i, q.sb_d(&ea(i))?.as_b_vector(&sb)?);
    }
    let mut bracket = BilinearMap::zero(&sb, &sb, &sb);
    let mut pairing = BilinearMap::zero(&sb, &sb, &sa);
    for i in 0..nb {
        for j in 0..nb {
            bracket.set(i, j, q.sb_product(0, &eb(i), &eb(j))?.as_b_vector(&sb)?);
            pairing.set(i, j, q.sb_product(1, &eb(i), &eb(j))?.as_a_vector()?);
        }
    }
    pairing.set_symmetric_flag(q.x.pairing.symmetric());
    let x = CourantAlgebroid {
        a: algebra.clone(),
        b: sb,
        action,
        bracket,
        anchor,
        pairing,
        partial,
    };
    Ok((algebra, x))
}

/// Per-table comparison of an extracted algebroid against the original.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct RoundtripSummary {
    pub a_tables: (usize, usize),
    pub b_tables: (usize, usize),
    pub partial_equal: bool,
    pub unit_equal: bool,
    pub dim0: (usize, usize),
    pub dim1: (usize, usize),
}

impl fmt::Display for RoundtripSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eq = |b: bool| if b { "equal" } else { "DIFFERENT" };
        write!(
            f,
            "A: {}/{} tables equal; B: {}/{} tables equal; partial: {}; unit: {}",
            self.a_tables.0,
            self.a_tables.1,
            self.b_tables.0,
            self.b_tables.1,
            eq(self.partial_equal),
            eq(self.unit_equal)
        )
    }
}

pub fn compare_tables(x: &CourantAlgebroid, y: &CourantAlgebroid, s: &mut Scan) -> RoundtripSummary {
    let mut sum = RoundtripSummary::default();
    let mut table = |name: &str, l: &BilinearMap, r: &BilinearMap, slot: &mut (usize, usize)| {
        slot.1 += 1;
        let ok = l.same_table(r);
        if ok {
            slot.0 += 1;
        }
        s.holds("roundtrip", &[name], ok, || format!("{l:?}"), || format!("{r:?}"));
    };
    let mut a = (0, 0);
    let mut b = (0, 0);
    table("mult", &x.a.mult, &y.a.mult, &mut a);
    table("action", &x.action, &y.action, &mut b);
    table("bracket", &x.bracket, &y.bracket, &mut b);
    table("anchor", &x.anchor, &y.anchor, &mut b);
    table("pairing", &x.pairing, &y.pairing, &mut b);
    sum.a_tables = a;
    sum.b_tables = b;
    sum.partial_equal = x.partial == y.partial;
    s.holds("roundtrip", &["partial"], sum.partial_equal, || format!("{:?}", x.partial), || format!("{:?}", y.partial));
    sum.unit_equal = x.a.unit == y.a.unit;
    s.eq("roundtrip", &["unit"], &x.a.unit, &y.a.unit);
    sum
}

/// Builds the full pipeline from `x`, extracts degrees 0 and 1, and compares
/// table for table; also checks the graded dimensions and that the
/// extracted structure is again a Courant algebroid.
pub fn roundtrip(x: &CourantAlgebroid, cutoff: usize) -> Result<(CheckReport, RoundtripSummary)> {
    let q = SbAlgebra::new(x, cutoff.max(1))?;
    let (_, y) = extract_degree01(&q)?;
    let mut s = Scan::new(MODULE);
    let mut sum = compare_tables(x, &y, &mut s);
    sum.dim0 = (q.dim(0)?, x.a.space.dim());
    sum.dim1 = (q.dim(1)?, x.b.dim());
    s.eq("dim", &["0"], &sum.dim0.0, &sum.dim0.1);
    s.eq("dim", &["1"], &sum.dim1.0, &sum.dim1.1);
    let report = s.finish().merge(courant::check_courant(&y));
    Ok((report, sum))
}

pub fn roundtrip_check(x: &CourantAlgebroid, cutoff: usize) -> CheckReport {
    match roundtrip(x, cutoff) {
        Ok((r, _)) => r,
        Err(e) => {
            let mut s = Scan::new(MODULE);
            s.fail("roundtrip", &["pipeline"], e.to_string(), String::new());
            s.finish()
        }
    }
}

/// `reduce(u_n g) = 0` and `reduce(D g) = 0` for generators `u ∈ A ⊕ B` and
/// ideal generators `g`.
pub fn check_ideal_stability(q: &SbAlgebra) -> CheckReport {
    let gens = q.generators();
    let all: Vec<(String, ScElement)> = gens.all().cloned().collect();
    let vl = q.vl();
    let us: Vec<Gen> = vl.basis_of_degree(0).into_iter().chain(vl.basis_of_degree(1)).collect();
    let zero = q.to_sb(ScElement::zero());
    scan(MODULE, &all, |(gl, g), s| {
        match q.sc.d(g).and_then(|dg| q.reduce(&dg)) {
            Ok(r) => s.eq("ideal-d", &[gl.as_str()], &Cmp(q, r), &Cmp(q, zero.clone())),
            Err(e) => s.fail("ideal-d", &[gl.as_str()], e.to_string(), String::new()),
        }
        for &u in &us {
            let ul = vl.label(u);
            for n in 0..=u.degree() + 1 {
                let nl = n.to_string();
                let t = [ul.as_str(), gl.as_str(), nl.as_str()];
                let r = q.reduce(&q.sc.gen_act(n, u, g));
                match r {
                    Ok(r) => s.eq("ideal-product", &t, &Cmp(q, r), &Cmp(q, zero.clone())),
                    Err(e) => s.fail("ideal-product", &t, e.to_string(), String::new()),
                }
            }
        }
    })
}

/// A reproducible random corpus of `S(C)` elements within the cutoff.
pub fn random_corpus(q: &SbAlgebra, size: usize, seed: u64) -> Vec<ScElement> {
    let span: Vec<Monomial> = q.sc.monomials(q.cutoff(), 3);
    let mut rng = StdRng::seed_from_u64(seed);
    (0..size)
        .map(|_| {
            let mut u = ScElement::zero();
            for _ in 0..rng.random_range(1..=4) {
                let m = span[rng.random_range(0..span.len())].clone();
                let c = ratio(rng.random_range(-5..=5), rng.random_range(1..=3));
                u.add_term(m, &c);
            }
            u
        })
        .collect()
}

/// Graded dimensions in degrees 0 and 1, and on a random corpus: reduction
/// is idempotent, independent of the rewrite order, and preserves degree.
pub fn check_shape(q: &SbAlgebra, corpus_size: usize, seed: u64) -> CheckReport {
    let mut s = Scan::new(MODULE);
    match (q.dim(0), q.dim(1)) {
        (Ok(d0), Ok(d1)) => {
            s.eq("dim", &["0"], &d0, &q.x.a.space.dim());
            s.eq("dim", &["1"], &d1, &q.x.b.dim());
        }
        (Err(e), _) | (_, Err(e)) => s.fail("dim", &[], e.to_string(), String::new()),
    }
    let head = s.finish();
    let corpus = random_corpus(q, corpus_size, seed);
    let indexed: Vec<(usize, ScElement)> = corpus.into_iter().enumerate().collect();
    let body = scan(MODULE, &indexed, |(k, u), s| {
        let kl = format!("corpus[{k}]");
        let t = [kl.as_str()];
        let (left, right) = match (q.reduce_with(u, Strategy::Leftmost), q.reduce_with(u, Strategy::Rightmost)) {
            (Ok(l), Ok(r)) => (l, r),
            (Err(e), _) | (_, Err(e)) => {
                s.fail("reduce", &t, e.to_string(), String::new());
                return;
            }
        };
        let again = q.reduce(&q.lift(&left)).expect("normal forms stay within the cutoff");
        s.eq("idempotent", &t, &Cmp(q, again), &Cmp(q, left.clone()));
        let in_degrees = u.degrees();
        let ok = left.degrees().iter().all(|d| in_degrees.contains(d));
        s.holds("degree", &t, ok, || q.show(&left).to_string(), || format!("degrees {in_degrees:?}"));
        s.eq("confluence", &t, &Cmp(q, left), &Cmp(q, right));
    });
    head.merge(body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::courant::examples;
    use crate::scalar::int;

    fn q(x: &CourantAlgebroid, cutoff: usize) -> SbAlgebra {
        SbAlgebra::new(x, cutoff).unwrap()
    }

    fn bgen(x: &CourantAlgebroid, n: usize, l: &str) -> Gen {
        Gen::B { n, idx: x.b.index_of(l).unwrap() }
    }

    #[test]
    fn e0_e1_generators_reduce_to_defining_values() {
        let x = examples::exact(2).unwrap();
        let q = q(&x, 3);
        let xa = Vector::basis(&x.a.space, 1);
        let e = Vector::basis(&x.a.space, 0);
        let v = ScElement::gen(bgen(&x, 0, "xdel"));
        let ev = ScElement::monomial(vec![Gen::A(0), bgen(&x, 0, "xdel")]);
        assert_eq!(q.reduce(&ev).unwrap(), q.reduce(&v).unwrap());
        let xx = ScElement::monomial(vec![Gen::A(1), Gen::A(1)]);
        assert_eq!(q.reduce(&xx).unwrap(), q.a_elem(&x.a.mul(&xa, &xa)));
        let xb = ScElement::monomial(vec![Gen::A(1), bgen(&x, 0, "xdel")]);
        let expect = x.act(&xa, &Vector::basis(&x.b, x.b.index_of("xdel").unwrap()));
        assert_eq!(q.reduce(&xb).unwrap(), q.b_elem(&expect));
        assert_eq!(q.reduce(&ScElement::one()).unwrap(), q.a_elem(&e));
    }

    #[test]
    fn exact2_r4_example() {
        let x = examples::exact(2).unwrap();
        let q = q(&x, 3);
        let dx = bgen(&x, 0, "dx");
        let u = ScElement::monomial(vec![Gen::A(1), bgen(&x, 1, "dx")]);
        let mut expect = BTreeMap::new();
        expect.insert(vec![dx, dx], int(-1));
        let r = q.reduce(&u).unwrap();
        assert!(r.a_part.is_zero());
        assert_eq!(r.monomial_part, expect);
        assert_eq!(q.reduce_with(&u, Strategy::Rightmost).unwrap(), r);
    }

    #[test]
    fn pure_b_monomials_are_dependent_for_exact2() {
        // x·D(dx)·dx rewritten two ways: as (x·D dx)·dx it is -dx·dx·dx; as
        // (x·dx)·D(dx) it is 0. So dx·dx·dx lies in the ideal.
        let x = examples::exact(2).unwrap();
        let q = q(&x, 3);
        let dx = bgen(&x, 0, "dx");
        let cube: Monomial = vec![dx, dx, dx];
        let k3 = q.relations(3).unwrap();
        assert!(k3.rank() > 0);
        let row: BTreeMap<Monomial, Scalar> = [(cube, int(1))].into_iter().collect();
        assert!(k3.reduce(&row).is_empty());
    }

    #[test]
    fn raw_strategies_differ_only_by_relations() {
        let x = examples::exact(3).unwrap();
        let q = q(&x, 3);
        let corpus = random_corpus(&q, 200, 7);
        let mut saw_difference = false;
        for u in &corpus {
            let l = q.rewrite(u, Strategy::Leftmost).unwrap();
            let r = q.rewrite(u, Strategy::Rightmost).unwrap();
            if l != r {
                saw_difference = true;
            }
            let diff = l.minus(&r);
            assert!(q.canonical(diff).unwrap().is_zero());
        }
        assert!(saw_difference);
    }

    #[test]
    fn low_degree_relations_vanish() {
        for x in examples::all() {
            let q = q(&x, 2);
            assert_eq!(q.relations(0).unwrap().rank(), 0);
            assert_eq!(q.relations(1).unwrap().rank(), 0);
        }
    }

    #[test]
    fn heisenberg_quotient_products() {
        let x = examples::heisenberg();
        let q = q(&x, 3);
        let beta = q.b_elem(&Vector::basis(&x.b, 0));
        let e = q.a_elem(&x.a.unit);
        assert_eq!(q.sb_product(1, &beta, &beta).unwrap(), e);
        let dbeta = q.sb_d(&beta).unwrap();
        assert_eq!(q.sb_product(2, &dbeta, &beta).unwrap(), q.a_elem(&x.a.unit.scaled(&int(-2))));
    }

    #[test]
    fn sb_d_on_a_is_partial() {
        let x = examples::exact(3).unwrap();
        let q = q(&x, 3);
        for i in 0..x.a.space.dim() {
            let a = Vector::basis(&x.a.space, i);
            assert_eq!(q.sb_d(&q.a_elem(&a)).unwrap(), q.b_elem(&x.d(&a)));
        }
    }

    #[test]
    fn roundtrip_examples() {
        for (name, x) in examples::acceptance_set() {
            let (r, sum) = roundtrip(&x, 3).unwrap();
            assert!(r.passed(), "{name}: {r}");
            assert_eq!(sum.to_string(), "A: 1/1 tables equal; B: 4/4 tables equal; partial: equal; unit: equal");
        }
    }

    #[test]
    fn ideal_stability_and_shape() {
        for (name, x) in examples::acceptance_set() {
            let q = q(&x, 3);
            let r = check_ideal_stability(&q);
            assert!(r.passed(), "{name}: {r}");
            let r = check_shape(&q, 50, 1);
            assert!(r.passed(), "{name}: {r}");
            assert!(r.checked >= 150, "{name}: {}", r.checked);
        }
    }
}
