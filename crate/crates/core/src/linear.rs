//! Finite-dimensional linear algebra over the rationals, by structure constants.
//!
//! A [`BasedSpace`] is a named space with an ordered list of opaque basis
//! labels. Vectors are sparse maps from basis index to nonzero coefficient, so
//! two vectors are equal exactly when their stored maps are equal.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_scalar, Scalar};

#[derive(Debug)]
struct SpaceInner {
    name: String,
    basis: Vec<String>,
    index: HashMap<String, usize>,
}

/// A named vector space with a distinguished, ordered basis.
#[derive(Clone, Debug)]
pub struct BasedSpace(Arc<SpaceInner>);

impl BasedSpace {
    pub fn new<S: Into<String>>(name: impl Into<String>, basis: impl IntoIterator<Item = S>) -> Result<Self> {
        let name = name.into();
        let basis: Vec<String> = basis.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(basis.len());
        for (i, label) in basis.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::Structure(format!(
                    "duplicate basis label `{label}` in space `{name}`"
                )));
            }
        }
        Ok(BasedSpace(Arc::new(SpaceInner { name, basis, index })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn basis(&self) -> &[String] {
        &self.0.basis
    }

    pub fn dim(&self) -> usize {
        self.0.basis.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.basis[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.index.get(label).copied()
    }

    /// Same space under a different name.
    pub fn renamed(&self, name: impl Into<String>) -> BasedSpace {
        BasedSpace::new(name, self.basis().iter().cloned()).expect("labels already unique")
    }
}

impl PartialEq for BasedSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.name == other.0.name && self.0.basis == other.0.basis)
    }
}

impl Eq for BasedSpace {}

fn check_space(expected: &BasedSpace, found: &BasedSpace) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::SpaceMismatch {
            expected: expected.name().to_string(),
            found: found.name().to_string(),
        })
    }
}

/// A vector in canonical sparse form: stored coefficients are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vector {
    space: BasedSpace,
    coeffs: BTreeMap<usize, Scalar>,
}

impl Vector {
    pub fn zero(space: &BasedSpace) -> Vector {
        Vector {
            space: space.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(space: &BasedSpace, i: usize) -> Vector {
        assert!(i < space.dim(), "basis index {i} out of range for `{}`", space.name());
        let mut v = Vector::zero(space);
        v.coeffs.insert(i, Scalar::one());
        v
    }

    pub fn from_coeffs(space: &BasedSpace, coeffs: impl IntoIterator<Item = (usize, Scalar)>) -> Vector {
        let mut v = Vector::zero(space);
        for (i, c) in coeffs {
            v.add_coeff(i, &c);
        }
        v
    }

    pub fn space(&self) -> &BasedSpace {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add_coeff(&mut self, i: usize, c: &Scalar) {
        assert!(i < self.space.dim(), "basis index {i} out of range for `{}`", self.space.name());
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(i).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    /// `self += c * other`. Panics on a space mismatch; use [`vec_combine`]
    /// for checked combination of untrusted inputs.
    pub fn axpy(&mut self, c: &Scalar, other: &Vector) {
        assert!(
            self.space == other.space,
            "space mismatch: `{}` vs `{}`",
            self.space.name(),
            other.space.name()
        );
        if c.is_zero() {
            return;
        }
        for (i, x) in &other.coeffs {
            self.add_coeff(*i, &(c * x));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Vector {
        if c.is_zero() {
            return Vector::zero(&self.space);
        }
        Vector {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    pub fn plus(&self, other: &Vector) -> Vector {
        let mut v = self.clone();
        v.axpy(&Scalar::one(), other);
        v
    }

    pub fn minus(&self, other: &Vector) -> Vector {
        let mut v = self.clone();
        v.axpy(&-Scalar::one(), other);
        v
    }

    pub fn neg(&self) -> Vector {
        self.scaled(&-Scalar::one())
    }
}

/// Writes `c*label + c*label` (or `0`), the term syntax of the structure file format.
pub fn format_terms<'a>(terms: impl IntoIterator<Item = (String, &'a Scalar)>) -> String {
    let parts: Vec<String> = terms
        .into_iter()
        .map(|(label, c)| format!("{}*{}", format_scalar(c), label))
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format_terms(self.iter().map(|(i, c)| (self.space.label(i).to_string(), c)));
        f.write_str(&s)
    }
}

/// Exact linear combination of vectors sharing one space.
pub fn vec_combine(space: &BasedSpace, terms: &[(Scalar, Vector)]) -> Result<Vector> {
    let mut out = Vector::zero(space);
    for (c, v) in terms {
        check_space(space, v.space())?;
        out.axpy(c, v);
    }
    Ok(out)
}

/// A linear map stored column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    domain: BasedSpace,
    codomain: BasedSpace,
    columns: Vec<Vector>,
}

impl LinearMap {
    pub fn zero(domain: &BasedSpace, codomain: &BasedSpace) -> LinearMap {
        LinearMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            columns: vec![Vector::zero(codomain); domain.dim()],
        }
    }

    pub fn identity(space: &BasedSpace) -> LinearMap {
        LinearMap {
            domain: space.clone(),
            codomain: space.clone(),
            columns: (0..space.dim()).map(|i| Vector::basis(space, i)).collect(),
        }
    }

    pub fn domain(&self) -> &BasedSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &BasedSpace {
        &self.codomain
    }

    pub fn column(&self, i: usize) -> &Vector {
        &self.columns[i]
    }

    pub fn set_column(&mut self, i: usize, v: Vector) {
        assert!(v.space() == &self.codomain, "column outside the codomain");
        self.columns[i] = v;
    }

    pub fn column_mut(&mut self, i: usize) -> &mut Vector {
        &mut self.columns[i]
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        check_space(&self.domain, v.space())?;
        Ok(self.eval(v))
    }

    /// Unchecked application; panics on a space mismatch.
    pub fn eval(&self, v: &Vector) -> Vector {
        assert!(v.space() == &self.domain, "map `{}`: argument outside domain", self.domain.name());
        let mut out = Vector::zero(&self.codomain);
        for (i, c) in v.iter() {
            out.axpy(c, &self.columns[i]);
        }
        out
    }

    pub fn scaled(&self, c: &Scalar) -> LinearMap {
        LinearMap {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            columns: self.columns.iter().map(|v| v.scaled(c)).collect(),
        }
    }
}

pub fn map_apply(m: &LinearMap, v: &Vector) -> Result<Vector> {
    m.apply(v)
}

/// A bilinear map given by its table on pairs of basis vectors.
///
/// The symmetric/antisymmetric flags are assertions about the table, checked
/// when set through [`BilinearMap::with_symmetric`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearMap {
    left: BasedSpace,
    right: BasedSpace,
    codomain: BasedSpace,
    table: Vec<Vector>,
    symmetric: bool,
    antisymmetric: bool,
}

impl BilinearMap {
    pub fn zero(left: &BasedSpace, right: &BasedSpace, codomain: &BasedSpace) -> BilinearMap {
        BilinearMap {
            left: left.clone(),
            right: right.clone(),
            codomain: codomain.clone(),
            table: vec![Vector::zero(codomain); left.dim() * right.dim()],
            symmetric: false,
            antisymmetric: false,
        }
    }

    pub fn left(&self) -> &BasedSpace {
        &self.left
    }

    pub fn right(&self) -> &BasedSpace {
        &self.right
    }

    pub fn codomain(&self) -> &BasedSpace {
        &self.codomain
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn antisymmetric(&self) -> bool {
        self.antisymmetric
    }

    /// Flags the table symmetric; fails if it is not.
    pub fn with_symmetric(mut self) -> Result<BilinearMap> {
        if self.left != self.right {
            return Err(Error::Structure("symmetric flag on a map with distinct factors".into()));
        }
        let n = self.left.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.entry(i, j) != self.entry(j, i) {
                    return Err(Error::Structure(format!(
                        "table is not symmetric at ({}, {})",
                        self.left.label(i),
                        self.left.label(j)
                    )));
                }
            }
        }
        self.symmetric = true;
        Ok(self)
    }

    /// Sets the flag without validation; used when a file asserts symmetry and
    /// the checkers are expected to catch a false assertion.
    pub fn set_symmetric_flag(&mut self, flag: bool) {
        self.symmetric = flag;
    }

    pub fn set_antisymmetric_flag(&mut self, flag: bool) {
        self.antisymmetric = flag;
    }

    pub fn entry(&self, i: usize, j: usize) -> &Vector {
        &self.table[i * self.right.dim() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Vector) {
        assert!(v.space() == &self.codomain, "entry outside the codomain");
        let k = i * self.right.dim() + j;
        self.table[k] = v;
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Vector {
        let k = i * self.right.dim() + j;
        &mut self.table[k]
    }

    pub fn apply(&self, u: &Vector, v: &Vector) -> Result<Vector> {
        check_space(&self.left, u.space())?;
        check_space(&self.right, v.space())?;
        Ok(self.eval(u, v))
    }

    /// Unchecked application; panics on a space mismatch.
    pub fn eval(&self, u: &Vector, v: &Vector) -> Vector {
        assert!(u.space() == &self.left && v.space() == &self.right, "bilinear map: argument space mismatch");
        let mut out = Vector::zero(&self.codomain);
        for (i, a) in u.iter() {
            for (j, b) in v.iter() {
                out.axpy(&(a * b), self.entry(i, j));
            }
        }
        out
    }

    /// The same table with arguments swapped, `(v, u) -> self(u, v)`.
    pub fn swapped(&self) -> BilinearMap {
        let mut out = BilinearMap::zero(&self.right, &self.left, &self.codomain);
        for i in 0..self.left.dim() {
            for j in 0..self.right.dim() {
                out.set(j, i, self.entry(i, j).clone());
            }
        }
        out.symmetric = self.symmetric;
        out.antisymmetric = self.antisymmetric;
        out
    }

    pub fn scaled(&self, c: &Scalar) -> BilinearMap {
        let mut out = self.clone();
        for v in &mut out.table {
            *v = v.scaled(c);
        }
        out
    }

    /// Equality of tables and spaces, ignoring the assertion flags.
    pub fn same_table(&self, other: &BilinearMap) -> bool {
        self.left == other.left && self.right == other.right && self.codomain == other.codomain && self.table == other.table
    }
}

pub fn bilin_apply(b: &BilinearMap, u: &Vector, v: &Vector) -> Result<Vector> {
    b.apply(u, v)
}

/// Incremental reduced row echelon form over an ordered set of column keys.
///
/// Each stored row has a pivot (its smallest key with nonzero coefficient),
/// normalized to 1, and no stored row has a nonzero entry in another row's
/// pivot column. Reducing a row against the echelon is therefore canonical:
/// two rows reduce to the same result iff their difference lies in the span.
#[derive(Clone, Debug)]
pub struct RowEchelon<K: Ord + Clone> {
    rows: BTreeMap<K, BTreeMap<K, Scalar>>,
}

impl<K: Ord + Clone> Default for RowEchelon<K> {
    fn default() -> Self {
        RowEchelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> RowEchelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    /// Fully reduces `row` against the stored rows.
    pub fn reduce(&self, row: &BTreeMap<K, Scalar>) -> BTreeMap<K, Scalar> {
        let mut row = row.clone();
        row.retain(|_, c| !c.is_zero());
        let pivots: Vec<K> = row.keys().filter(|k| self.rows.contains_key(*k)).cloned().collect();
        for p in pivots {
            let Some(c) = row.get(&p).cloned() else { continue };
            let basis_row = &self.rows[&p];
            for (k, x) in basis_row {
                let e = row.entry(k.clone()).or_insert_with(Scalar::zero);
                *e -= &c * x;
                if e.is_zero() {
                    row.remove(k);
                }
            }
        }
        row
    }

    /// Adds `row` to the span; returns false when it was already dependent.
    pub fn insert(&mut self, row: &BTreeMap<K, Scalar>) -> bool {
        let reduced = self.reduce(row);
        let Some((pivot, lead)) = reduced.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let normalized: BTreeMap<K, Scalar> = reduced.into_iter().map(|(k, c)| (k, c / &lead)).collect();
        for other in self.rows.values_mut() {
            if let Some(c) = other.get(&pivot).cloned() {
                for (k, x) in &normalized {
                    let e = other.entry(k.clone()).or_insert_with(Scalar::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        other.remove(k);
                    }
                }
            }
        }
        self.rows.insert(pivot, normalized);
        true
    }
}

/// Rank of a family of vectors of one space.
pub fn rank(vectors: &[Vector]) -> usize {
    let mut ech = RowEchelon::<usize>::new();
    for v in vectors {
        let row: BTreeMap<usize, Scalar> = v.iter().map(|(i, c)| (i, c.clone())).collect();
        ech.insert(&row);
    }
    ech.rank()
}

/// Finds some solution `x` of `sum_i x_i * columns[i] = target`, if one exists.
pub fn solve(columns: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = columns.len();
    let m = target.len();
    // Augmented matrix, rows are equations.
    let mut a: Vec<Vec<Scalar>> = (0..m)
        .map(|r| {
            let mut row: Vec<Scalar> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(r, p);
        let lead = a[r][col].clone();
        for x in a[r].iter_mut() {
            *x = &*x / &lead;
        }
        for i in 0..m {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * y;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
        if r == m {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Scalar::zero(); n];
    for (i, &col) in pivot_cols.iter().enumerate() {
        x[col] = a[i][n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;

    fn space(n: usize) -> BasedSpace {
        BasedSpace::new("V", (0..n).map(|i| format!("e{i}"))).unwrap()
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(BasedSpace::new("V", ["a", "a"]).is_err());
    }

    #[test]
    fn combine_identity_cancellation_and_addition() {
        let v3 = space(3);
        let v = Vector::from_coeffs(&v3, [(0, int(2)), (2, ratio(-1, 3))]);
        assert_eq!(vec_combine(&v3, &[(int(1), v.clone())]).unwrap(), v);
        assert!(vec_combine(&v3, &[(int(1), v.clone()), (int(-1), v.clone())]).unwrap().is_zero());
        let e1 = Vector::basis(&v3, 1);
        let sum = vec_combine(&v3, &[(ratio(1, 2), e1.clone()), (ratio(1, 3), e1.clone())]).unwrap();
        assert_eq!(sum, e1.scaled(&ratio(5, 6)));
    }

    #[test]
    fn combine_rejects_foreign_vectors() {
        let w = BasedSpace::new("W", ["w"]).unwrap();
        let err = vec_combine(&space(2), &[(int(1), Vector::basis(&w, 0))]);
        assert!(matches!(err, Err(Error::SpaceMismatch { .. })));
    }

    #[test]
    fn map_apply_cases() {
        let a = BasedSpace::new("A", ["e", "x"]).unwrap();
        let b = BasedSpace::new("B", ["dx"]).unwrap();
        let v = Vector::basis(&a, 1).scaled(&int(3));
        assert!(map_apply(&LinearMap::zero(&a, &b), &v).unwrap().is_zero());
        assert_eq!(map_apply(&LinearMap::identity(&a), &v).unwrap(), v);
        let mut d = LinearMap::zero(&a, &b);
        d.set_column(1, Vector::basis(&b, 0));
        assert_eq!(map_apply(&d, &v).unwrap(), Vector::basis(&b, 0).scaled(&int(3)));
        assert!(map_apply(&d, &Vector::basis(&b, 0)).is_err());
    }

    #[test]
    fn bilin_apply_zero_and_nilpotent() {
        let a = BasedSpace::new("A", ["e", "x"]).unwrap();
        let mut mult = BilinearMap::zero(&a, &a, &a);
        mult.set(0, 0, Vector::basis(&a, 0));
        mult.set(0, 1, Vector::basis(&a, 1));
        mult.set(1, 0, Vector::basis(&a, 1));
        let x = Vector::basis(&a, 1);
        assert!(bilin_apply(&mult, &x, &x).unwrap().is_zero());
        assert!(bilin_apply(&mult, &Vector::zero(&a), &x).unwrap().is_zero());
        assert!(mult.with_symmetric().is_ok());
    }

    #[test]
    fn echelon_is_canonical() {
        let mut ech = RowEchelon::<usize>::new();
        let r1: BTreeMap<usize, Scalar> = [(0, int(2)), (1, int(2))].into_iter().collect();
        let r2: BTreeMap<usize, Scalar> = [(1, int(1)), (2, int(1))].into_iter().collect();
        assert!(ech.insert(&r1));
        assert!(ech.insert(&r2));
        assert!(!ech.insert(&[(0, int(1)), (2, int(-1))].into_iter().collect()));
        assert_eq!(ech.rank(), 2);
        let a: BTreeMap<usize, Scalar> = [(0, int(1))].into_iter().collect();
        let b: BTreeMap<usize, Scalar> = [(2, int(1))].into_iter().collect();
        assert_eq!(ech.reduce(&a), ech.reduce(&b));
    }

    #[test]
    fn solve_small_system() {
        let cols = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
        let x = solve(&cols, &[int(3), int(1)]).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        assert!(solve(&[vec![int(1), int(1)]], &[int(1), int(2)]).is_none());
    }

    fn small_vec(n: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
        proptest::collection::vec((-5i64..=5, 1i64..=4), n)
    }

    proptest! {
        #[test]
        fn bilinear_in_left_argument(
            table in proptest::collection::vec(-3i64..=3, 27),
            u in small_vec(3), u2 in small_vec(3), v in small_vec(3),
            alpha in (-4i64..=4, 1i64..=3),
        ) {
            let s = space(3);
            let mut b = BilinearMap::zero(&s, &s, &s);
            for i in 0..3 {
                for j in 0..3 {
                    let col: Vec<(usize, Scalar)> = (0..3).map(|k| (k, int(table[9 * i + 3 * j + k]))).collect();
                    b.set(i, j, Vector::from_coeffs(&s, col));
                }
            }
            let mk = |xs: &Vec<(i64, i64)>| Vector::from_coeffs(&s, xs.iter().enumerate().map(|(i, (n, d))| (i, ratio(*n, *d))));
            let (u, u2, v) = (mk(&u), mk(&u2), mk(&v));
            let a = ratio(alpha.0, alpha.1);
            let lhs = bilin_apply(&b, &u.scaled(&a).plus(&u2), &v).unwrap();
            let rhs = bilin_apply(&b, &u, &v).unwrap().scaled(&a).plus(&bilin_apply(&b, &u2, &v).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
