//! Built-in finite-dimensional Courant algebroids.

use crate::error::{Error, Result};
use crate::linear::{BasedSpace, BilinearMap, LinearMap, Vector};
use crate::scalar::int;

use super::{CourantAlgebroid, UnitalCommAlgebra};

/// Names accepted by [`example`].
pub const NAMES: &[&str] = &[
    "trivial(1)",
    "trivial(2)",
    "trivial(3)",
    "quadratic_lie(sl2)",
    "heisenberg",
    "exact(2)",
    "exact(3)",
    "exact(4)",
];

fn with_scalar_action(a: UnitalCommAlgebra, b: &BasedSpace) -> CourantAlgebroid {
    let mut x = CourantAlgebroid::zero(a, b);
    for i in 0..b.dim() {
        x.action.set(0, i, Vector::basis(b, i));
    }
    x
}

/// `A = Q·e`, `B` of dimension `d`, every structure map zero.
pub fn trivial(d: usize) -> CourantAlgebroid {
    let b = BasedSpace::new(format!("B_trivial{d}"), (1..=d).map(|i| format!("b{i}"))).unwrap();
    with_scalar_action(UnitalCommAlgebra::ground("A"), &b)
}

/// `sl2` with its Killing form over the ground field.
pub fn quadratic_lie_sl2() -> CourantAlgebroid {
    let b = BasedSpace::new("sl2", ["E", "H", "F"]).unwrap();
    let mut x = with_scalar_action(UnitalCommAlgebra::ground("A"), &b);
    let v = |i: usize, c: i64| Vector::basis(&b, i).scaled(&int(c));
    let (e, h, f) = (0, 1, 2);
    for (i, j, out) in [(h, e, v(e, 2)), (h, f, v(f, -2)), (e, f, v(h, 1))] {
        x.bracket.set(i, j, out.clone());
        x.bracket.set(j, i, out.neg());
    }
    let unit = |c: i64| Vector::basis(&x.a.space, 0).scaled(&int(c));
    x.pairing.set(e, f, unit(4));
    x.pairing.set(f, e, unit(4));
    x.pairing.set(h, h, unit(8));
    x
}

/// One generator with `⟨β, β⟩ = e`.
pub fn heisenberg() -> CourantAlgebroid {
    let b = BasedSpace::new("heis", ["beta"]).unwrap();
    let mut x = with_scalar_action(UnitalCommAlgebra::ground("A"), &b);
    x.pairing.set(0, 0, x.a.unit.clone());
    x
}

fn power_label(k: usize, suffix: &str) -> String {
    match k {
        0 if suffix.is_empty() => "e".to_string(),
        0 => suffix.to_string(),
        1 => format!("x{suffix}"),
        _ => format!("x{k}{suffix}"),
    }
}

/// `A = Q[x]/(x^m)` with `B = Der(A) ⊕ Ω¹(A)`, the Dorfman bracket, the
/// symmetric pairing `ι_X η + ι_Y ω`, anchor the projection to `Der(A)`, and
/// `∂ = d`. Here `Der(A)` has basis `x^k d/dx` for `1 ≤ k < m`, `Ω¹(A)` has
/// basis `x^k dx` for `k ≤ m - 2`, and `Ω²(A) = 0`.
pub fn exact(m: usize) -> Result<CourantAlgebroid> {
    if !(2..=4).contains(&m) {
        return Err(Error::UnknownExample(format!("exact({m})")));
    }
    let a_space = BasedSpace::new(format!("A_exact{m}"), (0..m).map(|k| power_label(k, ""))).unwrap();
    let ders: Vec<usize> = (1..m).collect();
    let forms: Vec<usize> = (0..m - 1).collect();
    let labels = ders
        .iter()
        .map(|&k| power_label(k, "del"))
        .chain(forms.iter().map(|&k| power_label(k, "dx")));
    let b = BasedSpace::new(format!("B_exact{m}"), labels).unwrap();
    let nd = ders.len();

    // Truncated monomials: x^k is zero past x^(m-1), x^k dx past x^(m-2) dx.
    let xa = |k: usize, c: i64| -> Vector {
        if k < m {
            Vector::basis(&a_space, k).scaled(&int(c))
        } else {
            Vector::zero(&a_space)
        }
    };
    let xdel = |k: usize, c: i64| -> Vector {
        if (1..m).contains(&k) {
            Vector::basis(&b, k - 1).scaled(&int(c))
        } else {
            Vector::zero(&b)
        }
    };
    let xdx = |k: usize, c: i64| -> Vector {
        if k + 1 < m {
            Vector::basis(&b, nd + k).scaled(&int(c))
        } else {
            Vector::zero(&b)
        }
    };
    let der_of = |i: usize| ders[i];
    let form_of = |i: usize| forms[i - nd];

    let mut mult = BilinearMap::zero(&a_space, &a_space, &a_space);
    for i in 0..m {
        for j in 0..m {
            mult.set(i, j, xa(i + j, 1));
        }
    }
    let mult = mult.with_symmetric().expect("commutative");
    let a = UnitalCommAlgebra {
        unit: Vector::basis(&a_space, 0),
        space: a_space.clone(),
        mult,
    };
    let mut x = CourantAlgebroid::zero(a, &b);

    for i in 0..m {
        for u in 0..b.dim() {
            let v = if u < nd { xdel(i + der_of(u), 1) } else { xdx(i + form_of(u), 1) };
            x.action.set(i, u, v);
        }
    }
    for u in 0..b.dim() {
        for v in 0..b.dim() {
            match (u < nd, v < nd) {
                (true, true) => {
                    // [x^j d, x^k d] = (k - j) x^(j+k-1) d
                    let (j, k) = (der_of(u), der_of(v));
                    x.bracket.set(u, v, xdel(j + k - 1, k as i64 - j as i64));
                }
                (true, false) => {
                    // L_{x^j d}(x^k dx) = d(x^(j+k)) = (j+k) x^(j+k-1) dx
                    let (j, k) = (der_of(u), form_of(v));
                    x.bracket.set(u, v, xdx(j + k - 1, (j + k) as i64));
                    x.pairing.set(u, v, xa(j + k, 1));
                    x.pairing.set(v, u, xa(j + k, 1));
                }
                _ => {}
            }
        }
        if u < nd {
            for i in 0..m {
                // x^j d (x^i) = i x^(i+j-1)
                if i > 0 {
                    x.anchor.set(u, i, xa(i + der_of(u) - 1, i as i64));
                }
            }
        }
    }
    let mut partial = LinearMap::zero(&a_space, &b);
    for i in 1..m {
        partial.set_column(i, xdx(i - 1, i as i64));
    }
    x.partial = partial;
    Ok(x)
}

/// Looks up a built-in example. Parentheses are optional, so `trivial2`,
/// `trivial(2)` and `exact3` all resolve.
pub fn example(name: &str) -> Result<CourantAlgebroid> {
    let key: String = name
        .chars()
        .filter(|c| !matches!(c, '(' | ')' | ' ' | '_' | '-'))
        .collect::<String>()
        .to_ascii_lowercase();
    let unknown = || Error::UnknownExample(name.to_string());
    if key == "heisenberg" {
        return Ok(heisenberg());
    }
    if key == "quadraticliesl2" || key == "sl2" {
        return Ok(quadratic_lie_sl2());
    }
    if let Some(d) = key.strip_prefix("trivial") {
        let d: usize = d.parse().map_err(|_| unknown())?;
        return Ok(trivial(d));
    }
    if let Some(m) = key.strip_prefix("exact") {
        let m: usize = m.parse().map_err(|_| unknown())?;
        return exact(m).map_err(|_| unknown());
    }
    Err(unknown())
}

/// All examples except `exact(4)`.
pub fn acceptance_set() -> Vec<(String, CourantAlgebroid)> {
    [
        "trivial(1)",
        "trivial(2)",
        "trivial(3)",
        "quadratic_lie(sl2)",
        "heisenberg",
        "exact(2)",
        "exact(3)",
    ]
    .iter()
    .map(|n| (n.to_string(), example(n).unwrap()))
    .collect()
}

/// Every built-in example with its name.
pub fn named() -> Vec<(String, CourantAlgebroid)> {
    NAMES.iter().map(|n| (n.to_string(), example(n).unwrap())).collect()
}

pub fn all() -> Vec<CourantAlgebroid> {
    NAMES.iter().map(|n| example(n).unwrap()).collect()
}
