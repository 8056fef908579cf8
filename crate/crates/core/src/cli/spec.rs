//! The declaration file format: parsing, rendering and resolution into algebraic objects.
//!
//! ```text
//! field F3;
//! presentation B { gens: b; rels: b*b - b; }
//! basisalg C { type: structconst; dim: 2; unit: [1, 1]; mul: e1*e1 = e1, e2*e2 = e2; }
//! basisalg P { type: poly; vars: x; }
//! hopfbasis H { type: groupalg; group: cyclic(2); }
//! pseudogroup GL1 { size: 2; gens: t, s; entries: [t, 0; 0, s]; rels: t*s - 1, s*t - 1; antipode: t -> s, s -> t; }
//! comodule V { algebra: H; hopf: H; coaction: regular; }
//! presentedhopf C3 { group: cyclic(3); generator: g; }
//! morphism f { source: B; target: B; images: b -> b; }
//! basismap g { source: P; target: P; images: x -> x^2; }
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::basis_algebra::hopf::BasisComb2;
use crate::basis_algebra::{BasisAlgebra, BasisComb, BasisHopfAlgebra, BasisKind, FiniteGroup};
use crate::equivariant::{BasisComodule, Coaction, PresentedComodule};
use crate::error::{Error, Result};
use crate::exact_algebra::{FieldSpec, FreeAlgebra, GeneratorImageMap, Lin, NCPolynomial, Presentation, Scalar};
use crate::hopf_hom::PresentedHopf;
use crate::hopf_mapping::{Cell, HopfData, Pseudogroup};
use crate::mapping_core::{BasisMap, BasisRule};
use crate::syntax::{eval_in, eval_scalar, eval_tensor, expr_to_poly, syntax_error, tokenize, Cursor, Expr, Token};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupExpr {
    Cyclic(usize),
    Symmetric(usize),
    Product(Box<GroupExpr>, Box<GroupExpr>),
}

impl GroupExpr {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupExpr::Cyclic(n) => FiniteGroup::cyclic(*n),
            GroupExpr::Symmetric(n) => FiniteGroup::symmetric(*n),
            GroupExpr::Product(a, b) => a.build()?.product(&b.build()?),
        }
    }

    fn render(&self) -> String {
        match self {
            GroupExpr::Cyclic(n) => format!("cyclic({n})"),
            GroupExpr::Symmetric(n) => format!("symmetric({n})"),
            GroupExpr::Product(a, b) => format!("{} x {}", a.render(), b.render()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisBody {
    StructConst { labels: Vec<String>, unit: Vec<Expr>, mul: Vec<(String, String, Expr)> },
    Poly { vars: Vec<String> },
    Group(GroupExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoactionDecl {
    Regular,
    Trivial,
    Grading(Vec<String>),
    Table(Vec<(String, Expr)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HopfBody {
    Group {
        group: GroupExpr,
        generator: Option<String>,
    },
    Explicit {
        presentation: String,
        comul: Vec<(String, Expr)>,
        counit: Vec<(String, Expr)>,
        antipode: Vec<(String, Expr)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Presentation {
        name: String,
        gens: Vec<String>,
        rels: Vec<Expr>,
    },
    Basis {
        name: String,
        hopf: bool,
        body: BasisBody,
    },
    Pseudogroup {
        name: String,
        size: usize,
        gens: Vec<String>,
        entries: Vec<Expr>,
        rels: Vec<Expr>,
        antipode: Vec<(String, Expr)>,
    },
    Comodule {
        name: String,
        algebra: String,
        hopf: String,
        coaction: CoactionDecl,
    },
    PresentedHopf {
        name: String,
        body: HopfBody,
    },
    Morphism {
        name: String,
        source: String,
        target: String,
        images: Vec<(String, Expr)>,
    },
    BasisMap {
        name: String,
        source: String,
        target: String,
        images: Vec<(String, Expr)>,
    },
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Presentation { name, .. }
            | Decl::Basis { name, .. }
            | Decl::Pseudogroup { name, .. }
            | Decl::Comodule { name, .. }
            | Decl::PresentedHopf { name, .. }
            | Decl::Morphism { name, .. }
            | Decl::BasisMap { name, .. } => name,
        }
    }

    fn kind(&self) -> Kind {
        match self {
            Decl::Presentation { .. } => Kind::Presentation,
            Decl::Basis { hopf: false, .. } => Kind::Basis,
            Decl::Basis { hopf: true, .. } => Kind::HopfBasis,
            Decl::Pseudogroup { .. } => Kind::Pseudogroup,
            Decl::Comodule { .. } => Kind::Comodule,
            Decl::PresentedHopf { .. } => Kind::PresentedHopf,
            Decl::Morphism { .. } => Kind::Morphism,
            Decl::BasisMap { .. } => Kind::BasisMap,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Presentation,
    Basis,
    HopfBasis,
    Pseudogroup,
    Comodule,
    PresentedHopf,
    Morphism,
    BasisMap,
}

impl Kind {
    fn describe(self) -> &'static str {
        match self {
            Kind::Presentation => "presentation",
            Kind::Basis => "basisalg",
            Kind::HopfBasis => "hopfbasis",
            Kind::Pseudogroup => "pseudogroup",
            Kind::Comodule => "comodule",
            Kind::PresentedHopf => "presentedhopf",
            Kind::Morphism => "morphism",
            Kind::BasisMap => "basismap",
        }
    }
}

/// A parsed declaration file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecFile {
    pub field: FieldSpec,
    pub decls: Vec<Decl>,
}

struct Parser {
    c: Cursor,
    kinds: HashMap<String, Kind>,
}

impl Parser {
    fn keyword(&mut self, kw: &str) -> Result<()> {
        let at = self.c.here();
        match self.c.advance() {
            Token::Ident(s) if s == kw => Ok(()),
            t => Err(syntax_error(at.0, at.1, format!("expected `{kw}`, found {t}"))),
        }
    }

    fn field_key(&mut self, kw: &str) -> Result<()> {
        self.keyword(kw)?;
        self.c.expect_sym(':')
    }

    fn usize(&mut self) -> Result<usize> {
        let at = self.c.here();
        let n = self.c.int()?;
        n.try_into().map_err(|_| syntax_error(at.0, at.1, "integer too large"))
    }

    fn ident_list(&mut self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        if self.c.at_sym(';') {
            return Ok(out);
        }
        loop {
            out.push(self.c.ident()?);
            if !self.c.eat_sym(',') {
                return Ok(out);
            }
        }
    }

    fn expr_list(&mut self) -> Result<Vec<Expr>> {
        let mut out = Vec::new();
        if self.c.at_sym(';') {
            return Ok(out);
        }
        loop {
            out.push(self.c.expr()?);
            if !self.c.eat_sym(',') {
                return Ok(out);
            }
        }
    }

    fn map_list(&mut self) -> Result<Vec<(String, Expr)>> {
        let mut out = Vec::new();
        if self.c.at_sym(';') {
            return Ok(out);
        }
        loop {
            let k = self.c.ident()?;
            self.c.expect_arrow()?;
            out.push((k, self.c.expr()?));
            if !self.c.eat_sym(',') {
                return Ok(out);
            }
        }
    }

    fn reference(&mut self, allowed: &[Kind]) -> Result<String> {
        let at = self.c.here();
        let name = self.c.ident()?;
        match self.kinds.get(&name) {
            None => Err(syntax_error(at.0, at.1, format!("unresolved reference `{name}`"))),
            Some(k) if !allowed.contains(k) => {
                let want: Vec<&str> = allowed.iter().map(|k| k.describe()).collect();
                Err(syntax_error(at.0, at.1, format!("`{name}` is a {}, expected {}", k.describe(), want.join(" or "))))
            }
            Some(_) => Ok(name),
        }
    }

    fn group(&mut self) -> Result<GroupExpr> {
        let mut g = self.group_atom()?;
        while matches!(self.c.peek(), Token::Ident(s) if s == "x") {
            self.c.advance();
            g = GroupExpr::Product(Box::new(g), Box::new(self.group_atom()?));
        }
        Ok(g)
    }

    fn group_atom(&mut self) -> Result<GroupExpr> {
        let at = self.c.here();
        let kind = self.c.ident()?;
        self.c.expect_sym('(')?;
        let n = self.usize()?;
        self.c.expect_sym(')')?;
        match kind.as_str() {
            "cyclic" => Ok(GroupExpr::Cyclic(n)),
            "symmetric" => Ok(GroupExpr::Symmetric(n)),
            _ => Err(syntax_error(at.0, at.1, format!("unknown group `{kind}`"))),
        }
    }

    fn end(&mut self) -> Result<()> {
        self.c.expect_sym(';')
    }

    fn decl(&mut self) -> Result<Decl> {
        let at = self.c.here();
        let kw = self.c.ident()?;
        let name_at = self.c.here();
        let name = self.c.ident()?;
        if self.kinds.contains_key(&name) {
            return Err(syntax_error(name_at.0, name_at.1, format!("duplicate name `{name}`")));
        }
        self.c.expect_sym('{')?;
        let d = match kw.as_str() {
            "presentation" => {
                self.field_key("gens")?;
                let gens = self.ident_list()?;
                self.end()?;
                self.field_key("rels")?;
                let rels = self.expr_list()?;
                self.end()?;
                Decl::Presentation { name, gens, rels }
            }
            "basisalg" | "hopfbasis" => {
                self.field_key("type")?;
                let t_at = self.c.here();
                let t = self.c.ident()?;
                self.end()?;
                let body = match t.as_str() {
                    "structconst" if kw == "basisalg" => {
                        self.field_key("dim")?;
                        let dim = self.usize()?;
                        self.end()?;
                        let labels = if matches!(self.c.peek(), Token::Ident(s) if s == "labels") {
                            self.field_key("labels")?;
                            let l = self.ident_list()?;
                            self.end()?;
                            l
                        } else {
                            (1..=dim).map(|i| format!("e{i}")).collect()
                        };
                        if labels.len() != dim {
                            return Err(self.c.error(format!("expected {dim} labels, found {}", labels.len())));
                        }
                        self.field_key("unit")?;
                        self.c.expect_sym('[')?;
                        let mut unit = Vec::new();
                        if !self.c.at_sym(']') {
                            loop {
                                unit.push(self.c.expr()?);
                                if !self.c.eat_sym(',') {
                                    break;
                                }
                            }
                        }
                        self.c.expect_sym(']')?;
                        self.end()?;
                        self.field_key("mul")?;
                        let mut mul = Vec::new();
                        if !self.c.at_sym(';') {
                            loop {
                                let a = self.c.ident()?;
                                self.c.expect_sym('*')?;
                                let b = self.c.ident()?;
                                self.c.expect_sym('=')?;
                                mul.push((a, b, self.c.expr()?));
                                if !self.c.eat_sym(',') {
                                    break;
                                }
                            }
                        }
                        self.end()?;
                        BasisBody::StructConst { labels, unit, mul }
                    }
                    "poly" if kw == "basisalg" => {
                        self.field_key("vars")?;
                        let vars = self.ident_list()?;
                        self.end()?;
                        BasisBody::Poly { vars }
                    }
                    "groupalg" => {
                        self.field_key("group")?;
                        let g = self.group()?;
                        self.end()?;
                        BasisBody::Group(g)
                    }
                    _ => return Err(syntax_error(t_at.0, t_at.1, format!("unknown {kw} type `{t}`"))),
                };
                Decl::Basis { name, hopf: kw == "hopfbasis", body }
            }
            "pseudogroup" => {
                self.field_key("size")?;
                let size = self.usize()?;
                self.end()?;
                self.field_key("gens")?;
                let gens = self.ident_list()?;
                self.end()?;
                self.field_key("entries")?;
                self.c.expect_sym('[')?;
                let mut entries = Vec::new();
                for k in 0..size {
                    for l in 0..size {
                        entries.push(self.c.expr()?);
                        if l + 1 < size {
                            self.c.expect_sym(',')?;
                        }
                    }
                    if k + 1 < size {
                        self.c.expect_sym(';')?;
                    }
                }
                self.c.expect_sym(']')?;
                self.end()?;
                self.field_key("rels")?;
                let rels = self.expr_list()?;
                self.end()?;
                self.field_key("antipode")?;
                let antipode = self.map_list()?;
                self.end()?;
                Decl::Pseudogroup { name, size, gens, entries, rels, antipode }
            }
            "comodule" => {
                self.field_key("algebra")?;
                let algebra = self.reference(&[Kind::Presentation, Kind::Basis, Kind::HopfBasis])?;
                self.end()?;
                self.field_key("hopf")?;
                let hopf = self.reference(&[Kind::HopfBasis])?;
                self.end()?;
                self.field_key("coaction")?;
                let coaction = match self.c.peek().clone() {
                    Token::Ident(s) if s == "regular" && *self.c.peek_at(1) == Token::Sym(';') => {
                        self.c.advance();
                        CoactionDecl::Regular
                    }
                    Token::Ident(s) if s == "trivial" && *self.c.peek_at(1) == Token::Sym(';') => {
                        self.c.advance();
                        CoactionDecl::Trivial
                    }
                    Token::Ident(s) if s == "grading" && *self.c.peek_at(1) != Token::Arrow => {
                        self.c.advance();
                        CoactionDecl::Grading(self.ident_list()?)
                    }
                    _ => CoactionDecl::Table(self.map_list()?),
                };
                self.end()?;
                Decl::Comodule { name, algebra, hopf, coaction }
            }
            "presentedhopf" => {
                let body = if matches!(self.c.peek(), Token::Ident(s) if s == "group") {
                    self.field_key("group")?;
                    let group = self.group()?;
                    self.end()?;
                    let generator = if matches!(self.c.peek(), Token::Ident(s) if s == "generator") {
                        self.field_key("generator")?;
                        let g = self.c.ident()?;
                        self.end()?;
                        Some(g)
                    } else {
                        None
                    };
                    HopfBody::Group { group, generator }
                } else {
                    self.field_key("presentation")?;
                    let presentation = self.reference(&[Kind::Presentation])?;
                    self.end()?;
                    self.field_key("comul")?;
                    let comul = self.map_list()?;
                    self.end()?;
                    self.field_key("counit")?;
                    let counit = self.map_list()?;
                    self.end()?;
                    self.field_key("antipode")?;
                    let antipode = self.map_list()?;
                    self.end()?;
                    HopfBody::Explicit { presentation, comul, counit, antipode }
                };
                Decl::PresentedHopf { name, body }
            }
            "morphism" | "basismap" => {
                let allowed: &[Kind] =
                    if kw == "morphism" { &[Kind::Presentation] } else { &[Kind::Basis, Kind::HopfBasis] };
                self.field_key("source")?;
                let source = self.reference(allowed)?;
                self.end()?;
                self.field_key("target")?;
                let target = self.reference(allowed)?;
                self.end()?;
                self.field_key("images")?;
                let images = self.map_list()?;
                self.end()?;
                if kw == "morphism" {
                    Decl::Morphism { name, source, target, images }
                } else {
                    Decl::BasisMap { name, source, target, images }
                }
            }
            _ => return Err(syntax_error(at.0, at.1, format!("unknown declaration `{kw}`"))),
        };
        self.c.expect_sym('}')?;
        self.kinds.insert(d.name().to_string(), d.kind());
        Ok(d)
    }
}

/// Parses a declaration file. References must point to earlier declarations.
pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let mut p = Parser { c: Cursor::new(tokenize(text)?), kinds: HashMap::new() };
    p.keyword("field")?;
    let at = p.c.here();
    let f = p.c.ident()?;
    let field = FieldSpec::parse(&f).map_err(|e| syntax_error(at.0, at.1, e.to_string()))?;
    p.end()?;
    let mut decls = Vec::new();
    while *p.c.peek() != Token::Eof {
        decls.push(p.decl()?);
    }
    Ok(SpecFile { field, decls })
}

fn join<T>(items: &[T], sep: &str, f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(sep)
}

fn maps(items: &[(String, Expr)]) -> String {
    join(items, ", ", |(k, e)| format!("{k} -> {e}"))
}

impl SpecFile {
    /// Canonical text; parsing it gives back an equal `SpecFile`.
    pub fn render(&self) -> String {
        let mut out = format!("field {};\n", self.field);
        for d in &self.decls {
            out.push('\n');
            let _ = match d {
                Decl::Presentation { name, gens, rels } => writeln!(
                    out,
                    "presentation {name} {{\n  gens: {};\n  rels: {};\n}}",
                    gens.join(", "),
                    join(rels, ", ", |e| e.to_string())
                ),
                Decl::Basis { name, hopf, body } => {
                    let kw = if *hopf { "hopfbasis" } else { "basisalg" };
                    let body = match body {
                        BasisBody::StructConst { labels, unit, mul } => format!(
                            "  type: structconst;\n  dim: {};\n  labels: {};\n  unit: [{}];\n  mul: {};",
                            labels.len(),
                            labels.join(", "),
                            join(unit, ", ", |e| e.to_string()),
                            join(mul, ", ", |(a, b, e)| format!("{a}*{b} = {e}"))
                        ),
                        BasisBody::Poly { vars } => format!("  type: poly;\n  vars: {};", vars.join(", ")),
                        BasisBody::Group(g) => format!("  type: groupalg;\n  group: {};", g.render()),
                    };
                    writeln!(out, "{kw} {name} {{\n{body}\n}}")
                }
                Decl::Pseudogroup { name, size, gens, entries, rels, antipode } => {
                    let rows: Vec<String> = entries.chunks(*size).map(|r| join(r, ", ", |e| e.to_string())).collect();
                    writeln!(
                        out,
                        "pseudogroup {name} {{\n  size: {size};\n  gens: {};\n  entries: [{}];\n  rels: {};\n  antipode: {};\n}}",
                        gens.join(", "),
                        rows.join("; "),
                        join(rels, ", ", |e| e.to_string()),
                        maps(antipode)
                    )
                }
                Decl::Comodule { name, algebra, hopf, coaction } => {
                    let c = match coaction {
                        CoactionDecl::Regular => "regular".to_string(),
                        CoactionDecl::Trivial => "trivial".to_string(),
                        CoactionDecl::Grading(g) => format!("grading {}", g.join(", ")),
                        CoactionDecl::Table(t) => maps(t),
                    };
                    writeln!(out, "comodule {name} {{\n  algebra: {algebra};\n  hopf: {hopf};\n  coaction: {c};\n}}")
                }
                Decl::PresentedHopf { name, body } => {
                    let body = match body {
                        HopfBody::Group { group, generator } => {
                            let mut s = format!("  group: {};", group.render());
                            if let Some(g) = generator {
                                let _ = write!(s, "\n  generator: {g};");
                            }
                            s
                        }
                        HopfBody::Explicit { presentation, comul, counit, antipode } => format!(
                            "  presentation: {presentation};\n  comul: {};\n  counit: {};\n  antipode: {};",
                            maps(comul),
                            maps(counit),
                            maps(antipode)
                        ),
                    };
                    writeln!(out, "presentedhopf {name} {{\n{body}\n}}")
                }
                Decl::Morphism { name, source, target, images } | Decl::BasisMap { name, source, target, images } => {
                    let kw = if matches!(d, Decl::Morphism { .. }) { "morphism" } else { "basismap" };
                    writeln!(
                        out,
                        "{kw} {name} {{\n  source: {source};\n  target: {target};\n  images: {};\n}}",
                        maps(images)
                    )
                }
            };
        }
        out
    }

    pub fn with_field(&self, field: FieldSpec) -> SpecFile {
        SpecFile { field, decls: self.decls.clone() }
    }

    pub fn resolve(&self) -> Result<Env> {
        let mut env = Env { field: self.field, ..Env::default() };
        for d in &self.decls {
            env.add(d).map_err(|e| match e {
                Error::Syntax { .. } => e,
                other => Error::Invalid(format!("in `{}`: {other}", d.name())),
            })?;
        }
        Ok(env)
    }
}

#[derive(Clone, Debug)]
pub enum Comodule {
    Basis(BasisComodule),
    Presented(PresentedComodule),
}

/// Resolved objects by name.
#[derive(Clone, Debug)]
pub struct Env {
    pub field: FieldSpec,
    pub presentations: BTreeMap<String, Arc<Presentation>>,
    pub bases: BTreeMap<String, Arc<BasisAlgebra>>,
    pub hopfs: BTreeMap<String, Arc<BasisHopfAlgebra>>,
    pub pseudogroups: BTreeMap<String, Pseudogroup>,
    pub comodules: BTreeMap<String, Comodule>,
    pub presented_hopfs: BTreeMap<String, PresentedHopf>,
    pub morphisms: BTreeMap<String, GeneratorImageMap>,
    pub basis_maps: BTreeMap<String, BasisMap>,
}

impl Default for Env {
    fn default() -> Self {
        Env {
            field: FieldSpec::Rationals,
            presentations: BTreeMap::new(),
            bases: BTreeMap::new(),
            hopfs: BTreeMap::new(),
            pseudogroups: BTreeMap::new(),
            comodules: BTreeMap::new(),
            presented_hopfs: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            basis_maps: BTreeMap::new(),
        }
    }
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, name: &str, what: &str) -> Result<&'a T> {
    map.get(name).ok_or_else(|| Error::Invalid(format!("no {what} named `{name}`")))
}

fn poly_in(e: &Expr, names: &[String], f: FieldSpec) -> Result<NCPolynomial> {
    expr_to_poly(e, names, f)
}

fn basis_expr(e: &Expr, c: &BasisAlgebra) -> Result<BasisComb> {
    eval_in(e, c, &|s| c.lookup_name(s))
}

/// Per-generator values from a `name -> expr` list, requiring every generator exactly once.
fn per_generator<T>(
    gens: &[String],
    items: &[(String, Expr)],
    mut eval: impl FnMut(&Expr) -> Result<T>,
) -> Result<Vec<T>> {
    let mut out: Vec<Option<T>> = gens.iter().map(|_| None).collect();
    for (k, e) in items {
        let i = gens.iter().position(|g| g == k).ok_or_else(|| Error::UnknownGenerator(k.clone()))?;
        if out[i].is_some() {
            return Err(Error::DuplicateGenerator(k.clone()));
        }
        out[i] = Some(eval(e)?);
    }
    out.into_iter().zip(gens).map(|(v, g)| v.ok_or_else(|| Error::MissingAssignment(g.clone()))).collect()
}

impl Env {
    pub fn presentation(&self, name: &str) -> Result<&Arc<Presentation>> {
        lookup(&self.presentations, name, "presentation")
    }

    /// A basis algebra, including the algebra underlying a `hopfbasis`.
    pub fn basis(&self, name: &str) -> Result<Arc<BasisAlgebra>> {
        if let Some(b) = self.bases.get(name) {
            return Ok(b.clone());
        }
        Ok(Arc::new(lookup(&self.hopfs, name, "basis algebra")?.algebra().clone()))
    }

    pub fn hopf(&self, name: &str) -> Result<&Arc<BasisHopfAlgebra>> {
        lookup(&self.hopfs, name, "hopfbasis")
    }

    pub fn pseudogroup(&self, name: &str) -> Result<&Pseudogroup> {
        lookup(&self.pseudogroups, name, "pseudogroup")
    }

    pub fn comodule(&self, name: &str) -> Result<&Comodule> {
        lookup(&self.comodules, name, "comodule")
    }

    pub fn presented_hopf(&self, name: &str) -> Result<&PresentedHopf> {
        lookup(&self.presented_hopfs, name, "presentedhopf")
    }

    pub fn morphism(&self, name: &str) -> Result<&GeneratorImageMap> {
        lookup(&self.morphisms, name, "morphism")
    }

    pub fn basis_map(&self, name: &str) -> Result<&BasisMap> {
        lookup(&self.basis_maps, name, "basismap")
    }

    /// A presented algebra by name: a presentation, or the algebra of a pseudogroup or presented Hopf algebra.
    pub fn source_algebra(&self, name: &str) -> Result<Arc<Presentation>> {
        if let Some(p) = self.presentations.get(name) {
            return Ok(p.clone());
        }
        if let Some(p) = self.pseudogroups.get(name) {
            return Ok(p.b.clone());
        }
        if let Some(h) = self.presented_hopfs.get(name) {
            return Ok(h.presentation.clone());
        }
        Err(Error::Invalid(format!("no presented algebra named `{name}`")))
    }

    fn add(&mut self, d: &Decl) -> Result<()> {
        let f = self.field;
        match d {
            Decl::Presentation { name, gens, rels } => {
                let rels = rels.iter().map(|r| poly_in(r, gens, f)).collect::<Result<Vec<_>>>()?;
                self.presentations
                    .insert(name.clone(), Arc::new(Presentation::new(name.clone(), f, gens.clone(), rels)?));
            }
            Decl::Basis { name, hopf, body } => {
                let alg = match body {
                    BasisBody::Poly { vars } => {
                        let v: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
                        BasisAlgebra::polynomial(name.clone(), f, &v)
                    }
                    BasisBody::Group(g) => BasisAlgebra::group_algebra(name.clone(), f, g.build()?),
                    BasisBody::StructConst { labels, unit, mul } => {
                        let n = labels.len();
                        if unit.len() != n {
                            return Err(Error::Invalid(format!("unit has {} entries, expected {n}", unit.len())));
                        }
                        let unit = unit.iter().map(|e| eval_scalar(e, f)).collect::<Result<Vec<Scalar>>>()?;
                        let mut products = Vec::new();
                        for (a, b, e) in mul {
                            let idx = |s: &str| {
                                labels
                                    .iter()
                                    .position(|l| l == s)
                                    .ok_or_else(|| Error::UnknownBasisElement(s.to_string(), name.clone()))
                            };
                            let p = poly_in(e, labels, f)?;
                            if p.degree() > 1 || p.iter().any(|(w, _)| w.is_unit()) {
                                return Err(Error::Invalid(format!(
                                    "product {a}*{b} must be a linear combination of basis labels"
                                )));
                            }
                            let mut v = vec![f.zero(); n];
                            for (w, c) in p.iter() {
                                v[w.letters()[0] as usize] = c.clone();
                            }
                            products.push(((idx(a)?, idx(b)?), v));
                        }
                        let alg = BasisAlgebra::from_products(name.clone(), f, labels.clone(), &products, unit)?;
                        alg.validate_structure(0)?;
                        alg
                    }
                };
                if *hopf {
                    self.hopfs.insert(name.clone(), Arc::new(BasisHopfAlgebra::from_algebra(alg)?));
                } else {
                    self.bases.insert(name.clone(), Arc::new(alg));
                }
            }
            Decl::Pseudogroup { name, size, gens, entries, rels, antipode } => {
                let rels = rels.iter().map(|r| poly_in(r, gens, f)).collect::<Result<Vec<_>>>()?;
                let b = Arc::new(Presentation::new(name.clone(), f, gens.clone(), rels)?);
                let cells = entries
                    .iter()
                    .map(|e| match e {
                        Expr::Name(s) => gens
                            .iter()
                            .position(|g| g == s)
                            .map(|i| Cell::Gen(i as u32))
                            .ok_or_else(|| Error::UnknownGenerator(s.clone())),
                        _ => eval_scalar(e, f).map(Cell::Const),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let t = per_generator(gens, antipode, |e| poly_in(e, gens, f))?;
                self.pseudogroups.insert(name.clone(), Pseudogroup::new(b, *size, cells, t)?);
            }
            Decl::Comodule { name, algebra, hopf, coaction } => {
                let h = self.hopf(hopf)?.clone();
                let c = if let Some(w) = self.presentations.get(algebra) {
                    let w = w.clone();
                    match coaction {
                        CoactionDecl::Trivial => Comodule::Presented(PresentedComodule::trivial(w, h)),
                        CoactionDecl::Table(items) => {
                            let free = FreeAlgebra(f);
                            let names = w.generators().to_vec();
                            let lf = |s: &str| poly_in(&Expr::Name(s.to_string()), &names, f);
                            let ha = h.algebra();
                            let rf = |s: &str| ha.lookup_name(s);
                            let coaction = per_generator(&names, items, |e| {
                                let mut out = Vec::new();
                                for (p, c) in eval_tensor(e, &free, &lf, ha, &rf)? {
                                    for (eta, k) in c.iter() {
                                        out.push((p.scale(k), eta.clone()));
                                    }
                                }
                                Ok(out)
                            })?;
                            Comodule::Presented(PresentedComodule { w, h, coaction })
                        }
                        _ => {
                            return Err(Error::Invalid(
                                "a presented comodule takes `trivial` or a generator table".into(),
                            ))
                        }
                    }
                } else {
                    let v = self.basis(algebra)?;
                    let coaction = match coaction {
                        CoactionDecl::Regular => {
                            if *v != *h.algebra() {
                                return Err(Error::Invalid(
                                    "`regular` needs the algebra to be the Hopf algebra itself".into(),
                                ));
                            }
                            return self.insert_comodule(name, Comodule::Basis(BasisComodule::regular(h)?));
                        }
                        CoactionDecl::Trivial => Coaction::Trivial,
                        CoactionDecl::Grading(labels) => Coaction::Grading(
                            labels
                                .iter()
                                .map(|l| {
                                    h.group()
                                        .index_of(l)
                                        .ok_or_else(|| Error::UnknownBasisElement(l.clone(), h.name().to_string()))
                                })
                                .collect::<Result<Vec<_>>>()?,
                        ),
                        CoactionDecl::Table(items) => {
                            let ha = h.algebra();
                            let lf = |s: &str| v.lookup_name(s);
                            let rf = |s: &str| ha.lookup_name(s);
                            let mut table = BTreeMap::new();
                            for (k, e) in items {
                                let key = v.parse_label(k)?;
                                let mut img: BasisComb2 = Lin::zero(f);
                                for (a, b) in eval_tensor(e, v.as_ref(), &lf, ha, &rf)? {
                                    for (x, s) in a.iter() {
                                        for (y, t) in b.iter() {
                                            img.add_term((x.clone(), y.clone()), f.mul(s, t));
                                        }
                                    }
                                }
                                if table.insert(key, img).is_some() {
                                    return Err(Error::DuplicateGenerator(k.clone()));
                                }
                            }
                            Coaction::Table(table)
                        }
                    };
                    Comodule::Basis(BasisComodule { v, h, coaction })
                };
                self.insert_comodule(name, c)?;
            }
            Decl::PresentedHopf { name, body } => {
                let h = match body {
                    HopfBody::Group { group, generator: Some(g) } => match group {
                        GroupExpr::Cyclic(n) => PresentedHopf::cyclic(name, f, *n, g)?,
                        _ => return Err(Error::Invalid("`generator` is only available for cyclic groups".into())),
                    },
                    HopfBody::Group { group, generator: None } => {
                        PresentedHopf::group_algebra(name, f, group.build()?)?
                    }
                    HopfBody::Explicit { presentation, comul, counit, antipode } => {
                        let p = self.presentation(presentation)?.clone();
                        let names = p.generators().to_vec();
                        let free = FreeAlgebra(f);
                        let lf = |s: &str| poly_in(&Expr::Name(s.to_string()), &names, f);
                        let data = HopfData {
                            comul: per_generator(&names, comul, |e| eval_tensor(e, &free, &lf, &free, &lf))?,
                            counit: per_generator(&names, counit, |e| eval_scalar(e, f))?,
                            antipode: per_generator(&names, antipode, |e| poly_in(e, &names, f))?,
                        };
                        PresentedHopf::new(Arc::new(p.renamed(name.clone())), data)?
                    }
                };
                self.presented_hopfs.insert(name.clone(), h);
            }
            Decl::Morphism { name, source, target, images } => {
                let s = self.presentation(source)?.clone();
                let t = self.presentation(target)?.clone();
                let names = t.generators().to_vec();
                let imgs = per_generator(s.generators(), images, |e| poly_in(e, &names, f))?;
                self.morphisms.insert(name.clone(), GeneratorImageMap::new(s, t, imgs)?);
            }
            Decl::BasisMap { name, source, target, images } => {
                let s = self.basis(source)?;
                let t = self.basis(target)?;
                let rule = match s.kind() {
                    BasisKind::Monomial { vars } => {
                        BasisRule::Variables(per_generator(vars, images, |e| basis_expr(e, &t))?)
                    }
                    _ => {
                        let mut table = BTreeMap::new();
                        for (k, e) in images {
                            table.insert(s.parse_label(k)?, basis_expr(e, &t)?);
                        }
                        BasisRule::Table(table)
                    }
                };
                self.basis_maps.insert(name.clone(), BasisMap { source: s, target: t, rule });
            }
        }
        Ok(())
    }

    fn insert_comodule(&mut self, name: &str, c: Comodule) -> Result<()> {
        self.comodules.insert(name.to_string(), c);
        Ok(())
    }
}
