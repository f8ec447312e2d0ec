//! Single-constant perturbations of an algebroid, used to show that the
//! checkers see every structure constant.

use crate::linear::BilinearMap;
use crate::scalar::{format_scalar, int, ratio, Scalar};

use super::CourantAlgebroid;

#[derive(Clone, Debug)]
pub struct Mutant {
    pub site: String,
    pub algebroid: CourantAlgebroid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Table {
    Mult,
    Action,
    Bracket,
    Anchor,
    Pairing,
    Partial,
}

#[derive(Clone, Copy, Debug)]
struct Site {
    table: Table,
    i: usize,
    j: usize,
    k: usize,
}

/// Every coefficient position of every table. Diagonal pairing entries are
/// left out: over a one-dimensional base with zero bracket and anchor, any
/// value of `⟨u, u⟩` is again a Courant algebroid.
fn sites(x: &CourantAlgebroid) -> Vec<Site> {
    let bil = |t: Table, m: &BilinearMap| {
        let (l, r, c) = (m.left().dim(), m.right().dim(), m.codomain().dim());
        (0..l)
            .flat_map(move |i| (0..r).flat_map(move |j| (0..c).map(move |k| Site { table: t, i, j, k })))
            .filter(|s| !(s.table == Table::Pairing && s.i == s.j))
            .collect::<Vec<_>>()
    };
    let mut out = Vec::new();
    out.extend(bil(Table::Mult, &x.a.mult));
    out.extend(bil(Table::Action, &x.action));
    out.extend(bil(Table::Bracket, &x.bracket));
    out.extend(bil(Table::Anchor, &x.anchor));
    out.extend(bil(Table::Pairing, &x.pairing));
    for i in 0..x.a.space.dim() {
        for k in 0..x.b.dim() {
            out.push(Site { table: Table::Partial, i, j: 0, k });
        }
    }
    out
}

fn apply(x: &CourantAlgebroid, s: Site, delta: &Scalar) -> Mutant {
    let mut y = x.clone();
    let (name, lbl) = match s.table {
        Table::Partial => {
            y.partial.column_mut(s.i).add_coeff(s.k, delta);
            ("partial", format!("{} -> {}", x.a.space.label(s.i), x.b.label(s.k)))
        }
        t => {
            let (name, m) = match t {
                Table::Mult => ("mult", &mut y.a.mult),
                Table::Action => ("action", &mut y.action),
                Table::Bracket => ("bracket", &mut y.bracket),
                Table::Anchor => ("anchor", &mut y.anchor),
                Table::Pairing => ("pairing", &mut y.pairing),
                Table::Partial => unreachable!(),
            };
            let lbl = format!(
                "({}, {}) -> {}",
                m.left().label(s.i),
                m.right().label(s.j),
                m.codomain().label(s.k)
            );
            m.entry_mut(s.i, s.j).add_coeff(s.k, delta);
            (name, lbl)
        }
    };
    Mutant {
        site: format!("{name} {lbl} += {}", format_scalar(delta)),
        algebroid: y,
    }
}

/// One mutant per site with `+1`, then further rounds with `-1`, `2` and
/// `1/2` until at least `min` mutants exist (or the deltas run out).
pub fn mutants(x: &CourantAlgebroid, min: usize) -> Vec<Mutant> {
    let sites = sites(x);
    let deltas = [int(1), int(-1), int(2), ratio(1, 2)];
    let mut out = Vec::new();
    for (round, d) in deltas.iter().enumerate() {
        if round > 0 && out.len() >= min {
            break;
        }
        for s in &sites {
            if round > 0 && out.len() >= min {
                break;
            }
            out.push(apply(x, *s, d));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::courant::{check_everything, examples};
    use crate::linear::Vector;

    #[test]
    fn every_mutant_is_caught() {
        for (name, x) in examples::acceptance_set() {
            let ms = mutants(&x, 20);
            assert!(ms.len() >= 20, "{name}: only {} mutants", ms.len());
            for m in ms {
                assert!(!check_everything(&m.algebroid).passed(), "{name}: {} survived", m.site);
            }
        }
    }

    #[test]
    fn diagonal_pairing_rescaling_stays_courant() {
        for mut x in [examples::heisenberg(), examples::trivial(2)] {
            let e = Vector::basis(&x.a.space, 0);
            let bumped = x.pairing.entry(0, 0).plus(&e);
            x.pairing.set(0, 0, bumped);
            assert!(check_everything(&x).passed());
        }
    }
}
