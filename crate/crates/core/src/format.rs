//! The line-oriented structure-constant file format.
//!
//! ```text
//! # comment
//! META cutoff 3
//! META tag heisenberg
//! SPACE A e
//! SPACE heis beta
//! VECTOR unit A = 1*e
//! MAP partial A -> heis
//! END
//! PRODUCT pairing heis heis -> A symmetric
//!   (beta,beta) -> 1*e
//! END
//! STRUCTURE courant
//!   A A
//!   B heis
//!   unit unit
//!   pairing pairing
//!   partial partial
//! END
//! ```
//!
//! Terms are `c*label` joined by `+`, with `c` an integer or `p/q`; a bare
//! label means coefficient 1 and `0` is the empty sum. Unlisted entries are 0.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use num_traits::One;

use crate::courant::{CourantAlgebroid, UnitalCommAlgebra};
use crate::error::{Error, Result};
use crate::forward::GradedVpaView;
use crate::linear::{BasedSpace, BilinearMap, LinearMap, Vector};
use crate::scalar::{parse_scalar, Scalar};
use crate::tca::OneTruncatedConformalAlgebra;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Courant,
    Tca,
    GradedVpa,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Courant => "courant",
            Kind::Tca => "1tca",
            Kind::GradedVpa => "graded-vpa",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub key: String,
    pub args: Vec<String>,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub kind: Kind,
    pub bindings: Vec<Binding>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Meta {
    pub cutoff: Option<usize>,
    pub tags: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureFile {
    pub meta: Meta,
    pub spaces: Vec<BasedSpace>,
    pub vectors: Vec<(String, Vector)>,
    pub maps: Vec<(String, LinearMap)>,
    pub products: Vec<(String, BilinearMap)>,
    pub structure: Option<Structure>,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && s.chars().all(|c| !c.is_whitespace() && !"#(),*+=".contains(c))
        && !s.contains("->")
}

/// Whitespace-separated tokens with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_terms(space: &BasedSpace, text: &str, line: usize, col: usize) -> Result<Vector> {
    let mut v = Vector::zero(space);
    if text.trim() == "0" {
        return Ok(v);
    }
    let mut offset = 0;
    for part in text.split('+') {
        let lead = part.len() - part.trim_start().len();
        let c0 = col + offset + lead;
        offset += part.len() + 1;
        let term = part.trim();
        if term.is_empty() {
            return Err(perr(line, c0, "empty term"));
        }
        let (coef, label) = match term.split_once('*') {
            Some((c, l)) => (parse_scalar(c.trim()).map_err(|m| perr(line, c0, m))?, l.trim()),
            None => (Scalar::one(), term),
        };
        let i = space
            .index_of(label)
            .ok_or_else(|| perr(line, c0, format!("`{label}` is not a basis label of `{}`", space.name())))?;
        v.add_coeff(i, &coef);
    }
    Ok(v)
}

enum Block {
    Top,
    Map(usize),
    Product(usize),
    Structure,
}

struct Parser {
    file: StructureFile,
    names: HashMap<String, usize>,
    seen: std::collections::HashSet<(usize, usize)>,
}

impl Parser {
    fn space(&self, name: &str, line: usize, col: usize) -> Result<BasedSpace> {
        self.file
            .spaces
            .iter()
            .find(|s| s.name() == name)
            .cloned()
            .ok_or_else(|| perr(line, col, format!("undefined space `{name}`")))
    }

    fn define(&mut self, name: &str, line: usize, col: usize) -> Result<()> {
        if !valid_name(name) {
            return Err(perr(line, col, format!("invalid name `{name}`")));
        }
        if self.names.insert(name.to_string(), line).is_some() {
            return Err(perr(line, col, format!("`{name}` is defined twice")));
        }
        Ok(())
    }
}

pub fn parse_str(text: &str) -> Result<StructureFile> {
    let mut p = Parser {
        file: StructureFile::default(),
        names: HashMap::new(),
        seen: Default::default(),
    };
    let mut block = Block::Top;
    let mut last = 0;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        last = line;
        let body = raw.split('#').next().unwrap_or("");
        let toks = tokens(body);
        let Some(&(c0, head)) = toks.first() else { continue };
        if head == "END" {
            if matches!(block, Block::Top) {
                return Err(perr(line, c0, "END outside a block"));
            }
            block = Block::Top;
            p.seen.clear();
            continue;
        }
        match block {
            Block::Top => block = top_line(&mut p, &toks, body, line)?,
            Block::Map(k) => {
                let (lhs, rhs, rcol) = split_arrow(body, line)?;
                let m = &p.file.maps[k].1;
                let i = m
                    .domain()
                    .index_of(lhs)
                    .ok_or_else(|| perr(line, c0, format!("`{lhs}` is not a basis label of `{}`", m.domain().name())))?;
                if !p.seen.insert((i, 0)) {
                    return Err(perr(line, c0, format!("entry `{lhs}` given twice")));
                }
                let v = parse_terms(m.codomain(), rhs, line, rcol)?;
                p.file.maps[k].1.set_column(i, v);
            }
            Block::Product(k) => {
                let (lhs, rhs, rcol) = split_arrow(body, line)?;
                let inner = lhs
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| perr(line, c0, "expected `(left,right) -> terms`"))?;
                let (l, r) = inner
                    .split_once(',')
                    .ok_or_else(|| perr(line, c0, "expected `(left,right)`"))?;
                let (l, r) = (l.trim(), r.trim());
                let m = &p.file.products[k].1;
                let i = m
                    .left()
                    .index_of(l)
                    .ok_or_else(|| perr(line, c0 + 1, format!("`{l}` is not a basis label of `{}`", m.left().name())))?;
                let j = m
                    .right()
                    .index_of(r)
                    .ok_or_else(|| perr(line, c0, format!("`{r}` is not a basis label of `{}`", m.right().name())))?;
                if !p.seen.insert((i, j)) {
                    return Err(perr(line, c0, format!("entry `({l},{r})` given twice")));
                }
                let v = parse_terms(m.codomain(), rhs, line, rcol)?;
                p.file.products[k].1.set(i, j, v);
            }
            Block::Structure => {
                let st = p.file.structure.as_mut().expect("structure block open");
                for &(col, name) in &toks[1..] {
                    let is_index = name.parse::<usize>().is_ok();
                    if !is_index && name != "0" && !p.names.contains_key(name) {
                        return Err(perr(line, col, format!("undefined name `{name}`")));
                    }
                }
                if toks.len() < 2 {
                    return Err(perr(line, c0, format!("binding `{head}` has no value")));
                }
                st.bindings.push(Binding {
                    key: head.to_string(),
                    args: toks[1..].iter().map(|t| t.1.to_string()).collect(),
                    line,
                });
            }
        }
    }
    if !matches!(block, Block::Top) {
        return Err(perr(last + 1, 1, "missing END"));
    }
    Ok(p.file)
}

fn split_arrow(body: &str, line: usize) -> Result<(&str, &str, usize)> {
    let pos = body.find("->").ok_or_else(|| {
        let col = body.len() - body.trim_start().len() + 1;
        perr(line, col, "expected `->`")
    })?;
    Ok((body[..pos].trim(), &body[pos + 2..], pos + 3))
}

fn top_line(p: &mut Parser, toks: &[(usize, &str)], body: &str, line: usize) -> Result<Block> {
    let (c0, head) = toks[0];
    let arg = |k: usize| -> Result<(usize, &str)> {
        toks.get(k)
            .copied()
            .ok_or_else(|| perr(line, body.trim_end().len() + 1, format!("`{head}` needs more arguments")))
    };
    match head {
        "META" => {
            let (ck, key) = arg(1)?;
            let (cv, val) = arg(2)?;
            match key {
                "cutoff" => {
                    p.file.meta.cutoff = Some(val.parse().map_err(|_| perr(line, cv, "cutoff must be a natural number"))?);
                }
                "tag" => p.file.meta.tags.push(val.to_string()),
                _ => return Err(perr(line, ck, format!("unknown META key `{key}`"))),
            }
            Ok(Block::Top)
        }
        "SPACE" => {
            let (cn, name) = arg(1)?;
            p.define(name, line, cn)?;
            for &(cl, l) in &toks[2..] {
                if !valid_name(l) {
                    return Err(perr(line, cl, format!("invalid basis label `{l}`")));
                }
            }
            let space = BasedSpace::new(name, toks[2..].iter().map(|t| t.1))
                .map_err(|e| perr(line, cn, e.to_string()))?;
            p.file.spaces.push(space);
            Ok(Block::Top)
        }
        "VECTOR" => {
            let (cn, name) = arg(1)?;
            let (cs, sname) = arg(2)?;
            let (ce, eq) = arg(3)?;
            if eq != "=" {
                return Err(perr(line, ce, "expected `=`"));
            }
            let space = p.space(sname, line, cs)?;
            p.define(name, line, cn)?;
            let (rc, _) = arg(4).unwrap_or((ce + 1, ""));
            let v = parse_terms(&space, &body[rc - 1..], line, rc)?;
            p.file.vectors.push((name.to_string(), v));
            Ok(Block::Top)
        }
        "MAP" => {
            let (cn, name) = arg(1)?;
            let (cd, dom) = arg(2)?;
            let (ca, a) = arg(3)?;
            let (cc, cod) = arg(4)?;
            if a != "->" {
                return Err(perr(line, ca, "expected `->`"));
            }
            let (dom, cod) = (p.space(dom, line, cd)?, p.space(cod, line, cc)?);
            p.define(name, line, cn)?;
            if let Some(&(cx, x)) = toks.get(5) {
                return Err(perr(line, cx, format!("unexpected `{x}`")));
            }
            p.file.maps.push((name.to_string(), LinearMap::zero(&dom, &cod)));
            Ok(Block::Map(p.file.maps.len() - 1))
        }
        "PRODUCT" => {
            let (cn, name) = arg(1)?;
            let (cl, l) = arg(2)?;
            let (cr, r) = arg(3)?;
            let (ca, a) = arg(4)?;
            let (cc, cod) = arg(5)?;
            if a != "->" {
                return Err(perr(line, ca, "expected `->`"));
            }
            let (l, r, cod) = (p.space(l, line, cl)?, p.space(r, line, cr)?, p.space(cod, line, cc)?);
            p.define(name, line, cn)?;
            let mut m = BilinearMap::zero(&l, &r, &cod);
            for &(cf, flag) in &toks[6..] {
                match flag {
                    "symmetric" => m.set_symmetric_flag(true),
                    "antisymmetric" => m.set_antisymmetric_flag(true),
                    _ => return Err(perr(line, cf, format!("unknown flag `{flag}`"))),
                }
            }
            p.file.products.push((name.to_string(), m));
            Ok(Block::Product(p.file.products.len() - 1))
        }
        "STRUCTURE" => {
            let (ck, k) = arg(1)?;
            if p.file.structure.is_some() {
                return Err(perr(line, c0, "a file holds at most one STRUCTURE"));
            }
            let kind = match k {
                "courant" => Kind::Courant,
                "1tca" => Kind::Tca,
                "graded-vpa" => Kind::GradedVpa,
                _ => return Err(perr(line, ck, format!("unknown structure kind `{k}`"))),
            };
            p.file.structure = Some(Structure {
                kind,
                bindings: Vec::new(),
            });
            Ok(Block::Structure)
        }
        _ => Err(perr(line, c0, format!("unknown section `{head}`"))),
    }
}

pub fn parse_path(path: &Path) -> Result<StructureFile> {
    let text = std::fs::read_to_string(path)?;
    parse_str(&text)
}

impl StructureFile {
    /// Canonical serialization.
    pub fn print(&self) -> String {
        let mut out = String::new();
        if let Some(c) = self.meta.cutoff {
            writeln!(out, "META cutoff {c}").unwrap();
        }
        for t in &self.meta.tags {
            writeln!(out, "META tag {t}").unwrap();
        }
        for s in &self.spaces {
            write!(out, "SPACE {}", s.name()).unwrap();
            for l in s.basis() {
                write!(out, " {l}").unwrap();
            }
            out.push('\n');
        }
        for (name, v) in &self.vectors {
            writeln!(out, "VECTOR {name} {} = {v}", v.space().name()).unwrap();
        }
        for (name, m) in &self.maps {
            writeln!(out, "MAP {name} {} -> {}", m.domain().name(), m.codomain().name()).unwrap();
            for i in 0..m.domain().dim() {
                if !m.column(i).is_zero() {
                    writeln!(out, "  {} -> {}", m.domain().label(i), m.column(i)).unwrap();
                }
            }
            out.push_str("END\n");
        }
        for (name, m) in &self.products {
            write!(out, "PRODUCT {name} {} {} -> {}", m.left().name(), m.right().name(), m.codomain().name()).unwrap();
            if m.symmetric() {
                out.push_str(" symmetric");
            }
            if m.antisymmetric() {
                out.push_str(" antisymmetric");
            }
            out.push('\n');
            for i in 0..m.left().dim() {
                for j in 0..m.right().dim() {
                    let v = m.entry(i, j);
                    if !v.is_zero() {
                        writeln!(out, "  ({},{}) -> {v}", m.left().label(i), m.right().label(j)).unwrap();
                    }
                }
            }
            out.push_str("END\n");
        }
        if let Some(st) = &self.structure {
            writeln!(out, "STRUCTURE {}", st.kind.keyword()).unwrap();
            for b in &st.bindings {
                writeln!(out, "  {} {}", b.key, b.args.join(" ")).unwrap();
            }
            out.push_str("END\n");
        }
        out
    }

    fn push_space(&mut self, s: &BasedSpace) {
        if !self.spaces.iter().any(|t| t.name() == s.name()) {
            self.spaces.push(s.clone());
        }
    }

    fn bind(&mut self, key: &str, args: &[&str]) {
        let st = self.structure.as_mut().expect("structure set");
        st.bindings.push(Binding {
            key: key.to_string(),
            args: args.iter().map(|s| s.to_string()).collect(),
            line: 0,
        });
    }

    fn with_kind(kind: Kind) -> StructureFile {
        StructureFile {
            structure: Some(Structure {
                kind,
                bindings: Vec::new(),
            }),
            ..Default::default()
        }
    }

    fn add_algebra(&mut self, a: &UnitalCommAlgebra, action: &BilinearMap) {
        self.vectors.push(("unit".into(), a.unit.clone()));
        self.products.push(("mult".into(), a.mult.clone()));
        self.products.push(("action".into(), action.clone()));
        self.bind("mult", &["mult"]);
        self.bind("unit", &["unit"]);
        self.bind("action", &["action"]);
    }

    pub fn from_courant(x: &CourantAlgebroid) -> StructureFile {
        let mut f = StructureFile::with_kind(Kind::Courant);
        f.push_space(&x.a.space);
        f.push_space(&x.b);
        f.bind("A", &[x.a.space.name()]);
        f.bind("B", &[x.b.name()]);
        f.add_algebra(&x.a, &x.action);
        for (name, m) in [
            ("bracket", &x.bracket),
            ("anchor", &x.anchor),
            ("pairing", &x.pairing),
        ] {
            f.products.push((name.into(), m.clone()));
            f.bind(name, &[name]);
        }
        f.maps.push(("partial".into(), x.partial.clone()));
        f.bind("partial", &["partial"]);
        f
    }

    /// A 1-truncated conformal algebra, optionally with the algebra and module
    /// structures needed to convert back to an algebroid.
    pub fn from_1tca(t: &OneTruncatedConformalAlgebra, algebra: Option<(&UnitalCommAlgebra, &BilinearMap)>) -> StructureFile {
        let mut f = StructureFile::with_kind(Kind::Tca);
        f.push_space(&t.c0);
        f.push_space(&t.c1);
        f.bind("C0", &[t.c0.name()]);
        f.bind("C1", &[t.c1.name()]);
        for (name, m) in [
            ("p0_10", &t.p0_10),
            ("p0_01", &t.p0_01),
            ("p0_11", &t.p0_11),
            ("p1_11", &t.p1_11),
        ] {
            f.products.push((name.into(), m.clone()));
            f.bind(name, &[name]);
        }
        f.maps.push(("partial".into(), t.partial.clone()));
        f.bind("partial", &["partial"]);
        if let Some((a, action)) = algebra {
            f.add_algebra(a, action);
        }
        f
    }

    pub fn from_view(v: &GradedVpaView) -> StructureFile {
        let mut f = StructureFile::with_kind(Kind::GradedVpa);
        f.meta.cutoff = Some(v.max_degree());
        for (p, s) in v.spaces.iter().enumerate() {
            f.push_space(s);
            f.bind("degree", &[&p.to_string(), s.name()]);
        }
        for (&p, m) in &v.d {
            let name = format!("d{p}");
            f.maps.push((name.clone(), m.clone()));
            f.bind("d", &[&p.to_string(), &name]);
        }
        for (&(p, q), m) in &v.mult {
            let name = format!("mult{p}_{q}");
            f.products.push((name.clone(), m.clone()));
            f.bind("mult", &[&p.to_string(), &q.to_string(), &name]);
        }
        for (&(n, p, q), m) in &v.prod {
            let name = format!("prod{n}_{p}_{q}");
            f.products.push((name.clone(), m.clone()));
            f.bind("prod", &[&n.to_string(), &p.to_string(), &q.to_string(), &name]);
        }
        f
    }

    fn kind(&self, want: Kind) -> Result<&Structure> {
        match &self.structure {
            Some(s) if s.kind == want => Ok(s),
            Some(s) => Err(Error::Structure(format!(
                "expected a `{}` structure, found `{}`",
                want.keyword(),
                s.kind.keyword()
            ))),
            None => Err(Error::Structure("file has no STRUCTURE block".into())),
        }
    }

    fn lookup<'a>(&'a self, st: &'a Structure) -> Lookup<'a> {
        Lookup { f: self, st }
    }

    pub fn to_courant(&self) -> Result<CourantAlgebroid> {
        let st = self.kind(Kind::Courant)?;
        let l = self.lookup(st);
        let b = l.space("B")?.ok_or_else(|| l.missing("B"))?;
        let a = match l.space("A")? {
            None => {
                if ["mult", "unit", "action"].iter().any(|k| l.binding(k).is_some()) {
                    return Err(l.missing("A"));
                }
                let ground = UnitalCommAlgebra::ground("A");
                let mut x = CourantAlgebroid::zero(ground, &b);
                for i in 0..b.dim() {
                    x.action.set(0, i, Vector::basis(&b, i));
                }
                return l.fill_courant(x);
            }
            Some(a) => a,
        };
        let mult = l.product("mult", &a, &a, &a)?.ok_or_else(|| l.missing("mult"))?;
        let unit = match l.vector("unit", &a)? {
            Some(u) => u,
            None => UnitalCommAlgebra::solve_unit(&mult).ok_or_else(|| l.invalid("mult", "no unit"))?,
        };
        let action = l.product("action", &a, &b, &b)?.ok_or_else(|| l.missing("action"))?;
        let mut x = CourantAlgebroid::zero(UnitalCommAlgebra { space: a, mult, unit }, &b);
        x.action = action;
        l.fill_courant(x)
    }

    /// The conformal algebra and, when bound, the algebra and module
    /// structures on its degree-0 and degree-1 parts.
    #[allow(clippy::type_complexity)]
    pub fn to_1tca(&self) -> Result<(OneTruncatedConformalAlgebra, Option<(UnitalCommAlgebra, BilinearMap)>)> {
        let st = self.kind(Kind::Tca)?;
        let l = self.lookup(st);
        let c0 = l.space("C0")?.ok_or_else(|| l.missing("C0"))?;
        let c1 = l.space("C1")?.ok_or_else(|| l.missing("C1"))?;
        let mut t = OneTruncatedConformalAlgebra::zero(&c0, &c1);
        if let Some(m) = l.map("partial", &c0, &c1)? {
            t.partial = m;
        }
        for (key, slot, sp) in [
            ("p0_10", &mut t.p0_10, (&c1, &c0, &c0)),
            ("p0_01", &mut t.p0_01, (&c0, &c1, &c0)),
            ("p0_11", &mut t.p0_11, (&c1, &c1, &c1)),
            ("p1_11", &mut t.p1_11, (&c1, &c1, &c0)),
        ] {
            if let Some(m) = l.product(key, sp.0, sp.1, sp.2)? {
                *slot = m;
            }
        }
        let algebra = match l.product("mult", &c0, &c0, &c0)? {
            None => None,
            Some(mult) => {
                let unit = match l.vector("unit", &c0)? {
                    Some(u) => u,
                    None => UnitalCommAlgebra::solve_unit(&mult).ok_or_else(|| l.invalid("mult", "no unit"))?,
                };
                let action = l.product("action", &c0, &c1, &c1)?.ok_or_else(|| l.missing("action"))?;
                Some((UnitalCommAlgebra { space: c0.clone(), mult, unit }, action))
            }
        };
        Ok((t, algebra))
    }

    pub fn to_view(&self) -> Result<GradedVpaView> {
        let st = self.kind(Kind::GradedVpa)?;
        let l = self.lookup(st);
        let mut degrees: BTreeMap<usize, BasedSpace> = BTreeMap::new();
        let mut v = GradedVpaView {
            spaces: Vec::new(),
            d: BTreeMap::new(),
            prod: BTreeMap::new(),
            mult: BTreeMap::new(),
        };
        for b in &st.bindings {
            let nums = |k: usize| -> Result<Vec<usize>> {
                if b.args.len() != k + 1 {
                    return Err(perr(b.line, 1, format!("`{}` takes {} indices and a name", b.key, k)));
                }
                b.args[..k]
                    .iter()
                    .map(|s| s.parse().map_err(|_| perr(b.line, 1, format!("`{s}` is not an index"))))
                    .collect()
            };
            let name = b.args.last().map(String::as_str).unwrap_or("");
            match b.key.as_str() {
                "degree" => {
                    let p = nums(1)?[0];
                    let s = l.named_space(name, b.line)?;
                    if degrees.insert(p, s).is_some() {
                        return Err(perr(b.line, 1, format!("degree {p} bound twice")));
                    }
                }
                "d" => {
                    let p = nums(1)?[0];
                    v.d.insert(p, l.named_map(name, b.line)?);
                }
                "mult" => {
                    let k = nums(2)?;
                    v.mult.insert((k[0], k[1]), l.named_product(name, b.line)?);
                }
                "prod" => {
                    let k = nums(3)?;
                    v.prod.insert((k[0], k[1], k[2]), l.named_product(name, b.line)?);
                }
                other => return Err(perr(b.line, 1, format!("unknown graded-vpa binding `{other}`"))),
            }
        }
        for (i, (p, s)) in degrees.into_iter().enumerate() {
            if i != p {
                return Err(Error::Grading {
                    map: "degree".into(),
                    message: format!("degree {i} is missing"),
                });
            }
            v.spaces.push(s);
        }
        v.validate()?;
        Ok(v)
    }
}

struct Lookup<'a> {
    f: &'a StructureFile,
    st: &'a Structure,
}

impl Lookup<'_> {
    fn binding(&self, key: &str) -> Option<&Binding> {
        self.st.bindings.iter().find(|b| b.key == key)
    }

    fn missing(&self, key: &str) -> Error {
        Error::Structure(format!("`{}` structure needs a `{key}` binding", self.st.kind.keyword()))
    }

    fn invalid(&self, key: &str, message: &str) -> Error {
        let line = self.binding(key).map(|b| b.line).unwrap_or(0);
        perr(line, 1, format!("`{key}`: {message}"))
    }

    fn arg(&self, key: &str) -> Result<Option<(&str, usize)>> {
        match self.binding(key) {
            None => Ok(None),
            Some(b) if b.args.len() == 1 => Ok(Some((b.args[0].as_str(), b.line))),
            Some(b) => Err(perr(b.line, 1, format!("`{key}` takes one name"))),
        }
    }

    fn named_space(&self, name: &str, line: usize) -> Result<BasedSpace> {
        self.f
            .spaces
            .iter()
            .find(|s| s.name() == name)
            .cloned()
            .ok_or_else(|| perr(line, 1, format!("`{name}` is not a SPACE")))
    }

    fn named_map(&self, name: &str, line: usize) -> Result<LinearMap> {
        self.f
            .maps
            .iter()
            .find(|m| m.0 == name)
            .map(|m| m.1.clone())
            .ok_or_else(|| perr(line, 1, format!("`{name}` is not a MAP")))
    }

    fn named_product(&self, name: &str, line: usize) -> Result<BilinearMap> {
        self.f
            .products
            .iter()
            .find(|m| m.0 == name)
            .map(|m| m.1.clone())
            .ok_or_else(|| perr(line, 1, format!("`{name}` is not a PRODUCT")))
    }

    fn space(&self, key: &str) -> Result<Option<BasedSpace>> {
        match self.arg(key)? {
            None => Ok(None),
            Some((name, line)) => self.named_space(name, line).map(Some),
        }
    }

    fn vector(&self, key: &str, space: &BasedSpace) -> Result<Option<Vector>> {
        let Some((name, line)) = self.arg(key)? else { return Ok(None) };
        if name == "0" {
            return Ok(Some(Vector::zero(space)));
        }
        let v = self
            .f
            .vectors
            .iter()
            .find(|v| v.0 == name)
            .map(|v| v.1.clone())
            .ok_or_else(|| perr(line, 1, format!("`{name}` is not a VECTOR")))?;
        if v.space() != space {
            return Err(perr(line, 1, format!("`{name}` lies in `{}`, expected `{}`", v.space().name(), space.name())));
        }
        Ok(Some(v))
    }

    fn map(&self, key: &str, dom: &BasedSpace, cod: &BasedSpace) -> Result<Option<LinearMap>> {
        let Some((name, line)) = self.arg(key)? else { return Ok(None) };
        if name == "0" {
            return Ok(Some(LinearMap::zero(dom, cod)));
        }
        let m = self.named_map(name, line)?;
        if m.domain() != dom || m.codomain() != cod {
            return Err(perr(
                line,
                1,
                format!("`{key}` must map `{}` -> `{}`, `{name}` maps `{}` -> `{}`", dom.name(), cod.name(), m.domain().name(), m.codomain().name()),
            ));
        }
        Ok(Some(m))
    }

    fn product(&self, key: &str, l: &BasedSpace, r: &BasedSpace, c: &BasedSpace) -> Result<Option<BilinearMap>> {
        let Some((name, line)) = self.arg(key)? else { return Ok(None) };
        if name == "0" {
            return Ok(Some(BilinearMap::zero(l, r, c)));
        }
        let m = self.named_product(name, line)?;
        if m.left() != l || m.right() != r || m.codomain() != c {
            return Err(perr(
                line,
                1,
                format!(
                    "`{key}` must be `{} {} -> {}`, `{name}` is `{} {} -> {}`",
                    l.name(),
                    r.name(),
                    c.name(),
                    m.left().name(),
                    m.right().name(),
                    m.codomain().name()
                ),
            ));
        }
        Ok(Some(m))
    }

    fn fill_courant(&self, mut x: CourantAlgebroid) -> Result<CourantAlgebroid> {
        let (a, b) = (x.a.space.clone(), x.b.clone());
        for (key, slot, sp) in [
            ("bracket", &mut x.bracket, (&b, &b, &b)),
            ("anchor", &mut x.anchor, (&b, &a, &a)),
            ("pairing", &mut x.pairing, (&b, &b, &a)),
        ] {
            if let Some(m) = self.product(key, sp.0, sp.1, sp.2)? {
                *slot = m;
            }
        }
        if let Some(m) = self.map("partial", &a, &b)? {
            x.partial = m;
        }
        for k in self.st.bindings.iter().map(|b| b.key.as_str()) {
            if !["A", "B", "mult", "unit", "action", "bracket", "anchor", "pairing", "partial"].contains(&k) {
                return Err(self.invalid(k, "unknown courant binding"));
            }
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::courant::{check_courant, examples, to_1tca};
    use crate::forward::extract_courant;
    use crate::quotient::SbAlgebra;
    use proptest::prelude::*;

    fn fixpoint(f: &StructureFile) {
        let once = f.print();
        let again = parse_str(&once).unwrap();
        assert_eq!(again.print(), once);
    }

    #[test]
    fn courant_examples_roundtrip_through_text() {
        for x in examples::all() {
            let f = StructureFile::from_courant(&x);
            fixpoint(&f);
            let y = parse_str(&f.print()).unwrap().to_courant().unwrap();
            assert_eq!(y, x);
        }
    }

    #[test]
    fn tca_roundtrip_through_text() {
        let x = examples::exact(2).unwrap();
        let t = to_1tca(&x).unwrap();
        let f = StructureFile::from_1tca(&t, Some((&x.a, &x.action)));
        fixpoint(&f);
        let (t2, alg) = parse_str(&f.print()).unwrap().to_1tca().unwrap();
        assert_eq!(t2, t);
        assert_eq!(alg, Some((x.a.clone(), x.action.clone())));
    }

    #[test]
    fn view_roundtrip_through_text() {
        let x = examples::heisenberg();
        let v = GradedVpaView::from_quotient(&SbAlgebra::new(&x, 2).unwrap()).unwrap();
        let f = StructureFile::from_view(&v);
        fixpoint(&f);
        let v2 = parse_str(&f.print()).unwrap().to_view().unwrap();
        assert_eq!(v2, v);
        assert_eq!(extract_courant(&v2).unwrap(), x);
    }

    #[test]
    fn minimal_file_is_trivial_algebroid() {
        let x = parse_str("SPACE B b1\nSTRUCTURE courant\n  B B\n  bracket 0\n  pairing 0\nEND\n")
            .unwrap()
            .to_courant()
            .unwrap();
        assert_eq!(x.b.dim(), 1);
        assert!(check_courant(&x).passed());
        assert!(x.bracket.same_table(&BilinearMap::zero(&x.b, &x.b, &x.b)));
        assert_eq!(x.act(&x.a.unit, &Vector::basis(&x.b, 0)), Vector::basis(&x.b, 0));
    }

    #[test]
    fn zero_denominator_is_positioned() {
        let text = "SPACE A e\nSPACE B u\nPRODUCT p B B -> A\n  (u,u) -> 1/0*e\nEND\n";
        match parse_str(text) {
            Err(Error::Parse { line, column, message }) => {
                assert_eq!((line, column), (4, 12));
                assert!(message.contains("zero denominator"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [
            ("MAP f A -> A\nEND\n", 1, 7, "undefined space"),
            ("SPACE A e\nSPACE A f\n", 2, 7, "defined twice"),
            ("SPACE A e\nMAP f A -> A\n  g -> e\nEND\n", 3, 3, "not a basis label"),
            ("SPACE A e\nMAP f A -> A\n  e -> 2*g\nEND\n", 3, 8, "not a basis label"),
            ("SPACE A e\nMAP f A -> A\n", 3, 1, "missing END"),
            ("SPACE A e\nSTRUCTURE courant\n  B nope\nEND\n", 3, 5, "undefined name"),
            ("BOGUS\n", 1, 1, "unknown section"),
        ];
        for (text, l, c, msg) in cases {
            match parse_str(text) {
                Err(Error::Parse { line, column, message }) => {
                    assert_eq!((line, column), (l, c), "{text}: {message}");
                    assert!(message.contains(msg), "{message}");
                }
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn binding_type_mismatch_is_reported() {
        let text = "SPACE A e\nSPACE B u\nPRODUCT p B B -> B\nEND\nSTRUCTURE courant\n  B B\n  pairing p\nEND\n";
        match parse_str(text).unwrap().to_courant() {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 7);
                assert!(message.contains("pairing"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comments_and_bare_labels() {
        let text = "# heading\nSPACE A e x # trailing\nVECTOR v A = e + -3/2*x\n";
        let f = parse_str(text).unwrap();
        let v = &f.vectors[0].1;
        assert_eq!(v.to_string(), "1*e + -3/2*x");
    }

    proptest! {
        #[test]
        fn random_tables_are_a_fixpoint(entries in proptest::collection::vec((0usize..3, 0usize..3, 0usize..3, -20i64..20, 1i64..6), 0..12)) {
            let s = BasedSpace::new("S", ["p", "q", "r"]).unwrap();
            let mut m = BilinearMap::zero(&s, &s, &s);
            for (i, j, k, n, d) in entries {
                m.entry_mut(i, j).add_coeff(k, &crate::scalar::ratio(n, d));
            }
            let f = StructureFile {
                spaces: vec![s],
                products: vec![("m".into(), m.clone())],
                ..Default::default()
            };
            let back = parse_str(&f.print()).unwrap();
            prop_assert_eq!(&back.products[0].1, &m);
            prop_assert_eq!(back.print(), f.print());
        }
    }
}
