//! Command-line driver: declaration files in, presentations, counts and verdicts out.

pub mod spec;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Value};

use crate::basis_algebra::{BasisAlgebra, BasisComb, BasisKind, CoeffElem};
use crate::equivariant::{build_equivariant_algebra, enumerate_equivariant_morphisms};
use crate::error::{Error, Result};
use crate::exact_algebra::{verify_morphism, FieldSpec, Presentation, Verdict, DEFAULT_DEGREE_BOUND};
use crate::hopf_hom::{build_hom_algebra, enumerate_hopf_points};
use crate::hopf_mapping::{build_hopf_tower, check_hopf_axioms, Check, Pseudogroup};
use crate::mapping_core::{
    build_mapping_tower, enumerate_morphisms, enumerate_points, induced_promorphism, point_to_morphism, EnumOptions,
    MappingAlgebra,
};
use crate::pro_tower::ProMorphism;

pub use spec::{parse_spec, Comodule, Env, SpecFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Mapalg,
    Tower,
    Hopftower,
    Points,
    Morphisms,
    Induced,
    Equivariant,
    Homscheme,
    CheckHopf,
    CheckLaws,
    Roundtrip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "mapscheme", version, about = "Universal algebras of mappings between presented algebras")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Declaration file.
    #[arg(long)]
    pub spec: PathBuf,
    /// Source object (presentation, pseudogroup, comodule, presented Hopf algebra, morphism).
    #[arg(short = 'B')]
    pub b: Option<String>,
    /// Target object (basis algebra, Hopf basis algebra, comodule, basis map).
    #[arg(short = 'C')]
    pub c: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub level: usize,
    #[arg(long, default_value_t = 1)]
    pub pmax: usize,
    /// Overrides the field of the declaration file (`Q` or `F<p>`).
    #[arg(long)]
    pub field: Option<String>,
    /// Degree bound for Gröbner completion; defaults to `MAPSCHEME_DEGREE_BOUND` or 8.
    #[arg(long)]
    pub degree_bound: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Output of one command: text lines, the same data as JSON, and an optional verdict.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub verdict: Option<Verdict>,
    pub lines: Vec<String>,
    pub data: Map<String, Value>,
}

impl Report {
    fn new(command: String) -> Self {
        Report { command, verdict: None, lines: Vec::new(), data: Map::new() }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.data.insert(key.to_string(), v.into());
    }

    fn verdict(&mut self, v: Verdict) {
        self.verdict = Some(match self.verdict {
            Some(old) => old.and(v),
            None => v,
        });
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Some(Verdict::Refuted) => 1,
            Some(Verdict::Inconclusive) => 2,
            _ => 0,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut s = format!("# {}\n", self.command);
                for l in &self.lines {
                    s.push_str(l);
                    s.push('\n');
                }
                if let Some(v) = self.verdict {
                    let _ = writeln!(s, "verdict: {v}");
                }
                s
            }
            Format::Json => {
                let mut m = self.data.clone();
                m.insert("command".into(), json!(self.command));
                m.insert("verdict".into(), self.verdict.map_or(Value::Null, |v| json!(v.to_string())));
                let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("json");
                s.push('\n');
                s
            }
        }
    }
}

fn degree_bound(args: &Args) -> Result<usize> {
    if let Some(d) = args.degree_bound {
        return Ok(d);
    }
    match std::env::var("MAPSCHEME_DEGREE_BOUND") {
        Ok(v) => v.trim().parse().map_err(|_| Error::Invalid(format!("MAPSCHEME_DEGREE_BOUND is not a number: `{v}`"))),
        Err(_) => Ok(DEFAULT_DEGREE_BOUND),
    }
}

fn need<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::Invalid(format!("{flag} is required for this command")))
}

/// `-B` if given, else the only pseudogroup declared in the file.
fn pseudogroup_arg<'a>(env: &'a Env, b: &Option<String>) -> Result<&'a Pseudogroup> {
    if let Some(name) = b {
        return env.pseudogroup(name);
    }
    let mut all = env.pseudogroups.values();
    match (all.next(), all.next()) {
        (Some(pg), None) => Ok(pg),
        _ => Err(Error::Invalid("-B is required when the file does not declare exactly one pseudogroup".into())),
    }
}

fn echo(args: &Args) -> String {
    let name = Command::to_possible_value(&args.command).map(|v| v.get_name().to_string()).unwrap_or_default();
    let mut s = format!("mapscheme {name} --spec {}", args.spec.display());
    if let Some(b) = &args.b {
        let _ = write!(s, " -B {b}");
    }
    if let Some(c) = &args.c {
        let _ = write!(s, " -C {c}");
    }
    match args.command {
        Command::Hopftower | Command::CheckHopf => {
            let _ = write!(s, " --pmax {}", args.pmax);
        }
        Command::Roundtrip | Command::CheckLaws | Command::Homscheme => {}
        _ => {
            let _ = write!(s, " --level {}", args.level);
        }
    }
    if let Some(f) = &args.field {
        let _ = write!(s, " --field {f}");
    }
    if let Some(d) = args.degree_bound {
        let _ = write!(s, " --degree-bound {d}");
    }
    s
}

fn coeff_render(c: &BasisAlgebra, pres: &Presentation, x: &CoeffElem) -> String {
    let mut keys: Vec<_> = x.0.keys().collect();
    keys.sort_by(|a, b| c.cmp_elems(a, b));
    let terms: Vec<String> = keys
        .into_iter()
        .map(|e| {
            let p = pres.render_poly(&x.0[e]);
            let p = if p.contains(' ') { format!("({p})") } else { p };
            format!("{} @ {p}", c.label(e))
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn morphism_render(b: &Presentation, c: &BasisAlgebra, images: &[BasisComb]) -> String {
    b.generators().iter().zip(images).map(|(g, img)| format!("{g} -> {}", c.render(img))).collect::<Vec<_>>().join(", ")
}

fn presentation_lines(r: &mut Report, p: &Presentation) {
    r.line(format!("generators: {}", p.gen_count()));
    r.line(format!("relations: {}", p.relations().len()));
    for l in p.render().lines() {
        r.line(l);
    }
    r.put(
        "presentation",
        json!({
            "name": p.name(),
            "generators": p.generators(),
            "relations": p.relations().iter().map(|x| p.render_poly(x)).collect::<Vec<_>>(),
        }),
    );
}

fn mapping_lines(r: &mut Report, ma: &MappingAlgebra) {
    presentation_lines(r, &ma.presentation);
    let b = &ma.problem.b;
    let mut h = Vec::new();
    r.line("universal family:");
    for (g, x) in b.generators().iter().zip(&ma.h) {
        let s = format!("{g} -> {}", coeff_render(&ma.problem.c, &ma.presentation, x));
        r.line(format!("  {s}"));
        h.push(s);
    }
    r.put("family", h);
}

fn morphism_list(r: &mut Report, key: &str, b: &Presentation, c: &BasisAlgebra, ms: &[Vec<BasisComb>]) {
    let rendered: Vec<String> = ms.iter().map(|m| morphism_render(b, c, m)).collect();
    for (i, m) in rendered.iter().enumerate() {
        r.line(format!("  [{}] {m}", i + 1));
    }
    r.put(key, rendered);
}

fn sorted(mut v: Vec<Vec<BasisComb>>) -> Vec<Vec<BasisComb>> {
    v.sort();
    v
}

fn pro_lines(r: &mut Report, key: &str, title: &str, m: &ProMorphism) {
    let mut members = Vec::new();
    for mem in &m.members {
        r.line(format!("{title} level {} -> level {}:", mem.source_level, mem.target_level));
        let imgs = mem.map.render();
        for l in &imgs {
            r.line(format!("  {l}"));
        }
        members.push(json!({ "source_level": mem.source_level, "target_level": mem.target_level, "images": imgs }));
    }
    r.put(key, members);
}

fn check_lines(r: &mut Report, checks: &[Check]) {
    for c in checks {
        match &c.witness {
            Some(w) => r.line(format!("{}: {} ({w})", c.name, c.verdict)),
            None => r.line(format!("{}: {}", c.name, c.verdict)),
        }
        r.verdict(c.verdict);
    }
    r.put("checks", serde_json::to_value(checks).expect("json"));
}

fn verdict_of(res: Result<()>) -> Result<(Verdict, Option<String>)> {
    match res {
        Ok(()) => Ok((Verdict::Verified, None)),
        Err(Error::LawViolated { law, witness }) => Ok((Verdict::Refuted, Some(format!("{law} at {witness}")))),
        Err(e) => Err(e),
    }
}

/// Runs one command on already-parsed arguments.
pub fn run(args: &Args) -> Result<Report> {
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", args.spec.display())))?;
    let mut spec = parse_spec(&text)?;
    if let Some(f) = &args.field {
        spec = spec.with_field(FieldSpec::parse(f)?);
    }
    let mut r = Report::new(echo(args));
    let bound = degree_bound(args)?;
    let opts = EnumOptions { workers: args.workers.max(1), ..EnumOptions::default() };
    if args.command == Command::Roundtrip {
        let rendered = spec.render();
        let again = parse_spec(&rendered)?;
        let fixed = again == spec && again.render() == rendered;
        for l in rendered.lines() {
            r.line(l);
        }
        r.put("rendered", rendered);
        r.put("fixed_point", fixed);
        r.verdict(if fixed { Verdict::Verified } else { Verdict::Refuted });
        return Ok(r);
    }
    let env = spec.resolve()?;
    r.put("field", env.field.to_string());
    match args.command {
        Command::Roundtrip => unreachable!(),
        Command::Mapalg => {
            let b = env.source_algebra(need(&args.b, "-B")?)?;
            let c = env.basis(need(&args.c, "-C")?)?;
            let t = build_mapping_tower(b, c, args.level)?;
            mapping_lines(&mut r, t.level(args.level)?);
        }
        Command::Tower => {
            let b = env.source_algebra(need(&args.b, "-B")?)?;
            let c = env.basis(need(&args.c, "-C")?)?;
            let t = build_mapping_tower(b, c, args.level)?;
            let mut levels = Vec::new();
            let top = if t.tower.is_stable() { 0 } else { args.level };
            for p in 0..=top {
                let a = t.tower.level(p)?;
                r.line(format!("level {p}: {} generators, {} relations", a.gen_count(), a.relations().len()));
                let mut entry = json!({ "level": p, "generators": a.gen_count(), "relations": a.relations().len() });
                if p > 0 {
                    let conn = t.tower.connecting(p - 1, p)?;
                    let imgs = conn.render();
                    r.line(format!("  connecting {} -> {}:", p, p - 1));
                    for l in &imgs {
                        r.line(format!("    {l}"));
                    }
                    entry["connecting"] = json!(imgs);
                }
                levels.push(entry);
            }
            r.put("levels", levels);
            let v = t.tower.check_coherence(top, bound)?;
            r.line(format!("coherence: {v}"));
            r.put("coherence", v.to_string());
            r.verdict(v);
        }
        Command::Hopftower => {
            let pg = pseudogroup_arg(&env, &args.b)?;
            let m = coefficient_vars(&env, &args.c)?;
            let h = build_hopf_tower(pg, m, args.pmax)?;
            r.line(format!("coefficients: {}", h.mapping.c.name()));
            r.put("coefficients", h.mapping.c.name());
            for p in 0..=args.pmax {
                let a = h.mapping.tower.level(p)?;
                r.line(format!("level {p}: {} generators, {} relations", a.gen_count(), a.relations().len()));
            }
            let keep = |m: &ProMorphism| {
                let mut out = m.clone();
                out.members.retain(|mem| mem.target_level <= args.pmax);
                out
            };
            pro_lines(&mut r, "comultiplication", "comultiplication", &keep(&h.comul));
            pro_lines(&mut r, "counit", "counit", &keep(&h.counit));
            pro_lines(&mut r, "antipode", "antipode", &keep(&h.antipode));
        }
        Command::Points | Command::Morphisms => {
            let b = env.source_algebra(need(&args.b, "-B")?)?;
            let c = env.basis(need(&args.c, "-C")?)?;
            let l = c.level_chain()?.level(args.level);
            let brute = sorted(enumerate_morphisms(&b, &c, &l, &opts)?);
            if args.command == Command::Morphisms {
                r.line(format!("{} morphisms", brute.len()));
                morphism_list(&mut r, "morphisms", &b, &c, &brute);
                r.put("count", brute.len());
            } else {
                let t = build_mapping_tower(b.clone(), c.clone(), args.level)?;
                let ma = t.level(args.level)?;
                let pts = enumerate_points(&ma.presentation, &opts)?;
                let ms = sorted(pts.iter().map(|p| point_to_morphism(ma, p)).collect::<Result<Vec<_>>>()?);
                r.line(format!("{} points", ms.len()));
                morphism_list(&mut r, "points", &b, &c, &ms);
                r.line(format!("oracle: {} morphisms", brute.len()));
                let bij = ms == brute;
                r.line(format!("bijection: {}", if bij { "yes" } else { "no" }));
                r.put("count", ms.len());
                r.put("oracle_count", brute.len());
                r.put("bijection", bij);
                r.verdict(if bij { Verdict::Verified } else { Verdict::Refuted });
            }
        }
        Command::Induced => {
            let g = env.morphism(need(&args.b, "-B")?)?;
            let f = env.basis_map(need(&args.c, "-C")?)?;
            let src = build_mapping_tower(g.source.clone(), f.target.clone(), args.level)?;
            let dst = build_mapping_tower(g.target.clone(), f.source.clone(), args.level)?;
            let levels: Vec<usize> = (0..=args.level).collect();
            let m = induced_promorphism(g, f, &src, &dst, &levels)?;
            pro_lines(&mut r, "members", "member", &m);
            let rep = m.check_compatibility(bound)?;
            r.line(format!("compatibility: {}", rep.label()));
            r.put("compatibility", rep.label());
            r.verdict(if rep.is_compatible() { Verdict::Verified } else { rep.verdict.and(Verdict::Inconclusive) });
        }
        Command::Equivariant => {
            let w = match env.comodule(need(&args.b, "-B")?)? {
                Comodule::Presented(w) => w.clone(),
                Comodule::Basis(_) => return Err(Error::Invalid("-B must be a comodule over a presentation".into())),
            };
            let v = match env.comodule(need(&args.c, "-C")?)? {
                Comodule::Basis(v) => v.clone(),
                Comodule::Presented(_) => {
                    return Err(Error::Invalid("-C must be a comodule over a basis algebra".into()))
                }
            };
            let l = v.v.level_chain()?.level(args.level);
            let a = build_equivariant_algebra(&w, &v, &l)?;
            mapping_lines(&mut r, &a);
            if env.field.is_finite() {
                let pts = enumerate_points(&a.presentation, &opts)?;
                let ms = sorted(pts.iter().map(|p| point_to_morphism(&a, p)).collect::<Result<Vec<_>>>()?);
                let filtered = sorted(enumerate_equivariant_morphisms(&w, &v, &l, &opts)?);
                let plain = enumerate_morphisms(&w.w, &v.v, &l, &opts)?.len();
                r.line(format!("{} equivariant points", ms.len()));
                morphism_list(&mut r, "points", &w.w, &v.v, &ms);
                r.line(format!("oracle: {} equivariant of {plain} morphisms", filtered.len()));
                let bij = ms == filtered;
                r.line(format!("bijection: {}", if bij { "yes" } else { "no" }));
                r.put("count", ms.len());
                r.put("oracle_count", filtered.len());
                r.put("plain_count", plain);
                r.put("bijection", bij);
                r.verdict(if bij { Verdict::Verified } else { Verdict::Refuted });
            }
        }
        Command::Homscheme => {
            let h1 = env.presented_hopf(need(&args.b, "-B")?)?;
            let h2 = env.hopf(need(&args.c, "-C")?)?;
            let l = h2.algebra().basis()?;
            let a = build_hom_algebra(h1, h2, &l)?;
            mapping_lines(&mut r, &a.algebra);
            r.line(format!("comultiplicativity relations: {}", a.comultiplicativity));
            r.put("comultiplicativity", a.comultiplicativity);
            if env.field.is_finite() {
                let rep = enumerate_hopf_points(h1, h2, &l, &opts)?;
                let pts = sorted(rep.points.clone());
                r.line(format!("{} points", pts.len()));
                morphism_list(&mut r, "points", &h1.presentation, h2.algebra(), &pts);
                r.put("count", pts.len());
                if let Some(o) = &rep.oracle {
                    let bij = rep.bijection() == Some(true);
                    r.line(format!("oracle: {} group homomorphisms", o.len()));
                    r.line(format!("bijection: {}", if bij { "yes" } else { "no" }));
                    r.put("oracle_count", o.len());
                    r.put("bijection", bij);
                    r.verdict(if bij { Verdict::Verified } else { Verdict::Refuted });
                }
            }
        }
        Command::CheckHopf => {
            let pg = pseudogroup_arg(&env, &args.b)?;
            let m = coefficient_vars(&env, &args.c)?;
            let h = build_hopf_tower(pg, m, args.pmax)?;
            let rep = check_hopf_axioms(&h, bound, args.pmax)?;
            r.line(format!("degree bound: {bound}"));
            r.put("degree_bound", bound);
            check_lines(&mut r, &rep.checks().map(|c| c.clone()));
        }
        Command::CheckLaws => {
            let name = need(&args.b, "-B")?;
            let checks = check_laws(&env, name, bound)?;
            check_lines(&mut r, &checks);
        }
    }
    Ok(r)
}

fn coefficient_vars(env: &Env, c: &Option<String>) -> Result<usize> {
    match c {
        None => Ok(1),
        Some(name) => match env.basis(name)?.kind() {
            BasisKind::Monomial { vars } => Ok(vars.len()),
            _ => Err(Error::Invalid(format!("`{name}` must be a polynomial basis algebra"))),
        },
    }
}

/// The defining laws of a declared object, one check per law.
pub fn check_laws(env: &Env, name: &str, bound: usize) -> Result<Vec<Check>> {
    if let Ok(pg) = env.pseudogroup(name) {
        return pg.validate(bound);
    }
    if let Ok(h) = env.presented_hopf(name) {
        return h.validate(bound);
    }
    if let Ok(c) = env.comodule(name) {
        return Ok(match c {
            Comodule::Basis(v) => {
                let elems = v.v.level_chain()?.level(bound.min(4));
                let (verdict, witness) = verdict_of(v.validate(&elems))?;
                vec![Check::new("comodule laws", verdict, witness)]
            }
            Comodule::Presented(w) => vec![Check::new("comodule laws", w.validate(bound)?, None)],
        });
    }
    if let Ok(h) = env.hopf(name) {
        let (verdict, witness) = verdict_of(h.validate())?;
        return Ok(vec![Check::new("Hopf algebra laws", verdict, witness)]);
    }
    if let Ok(m) = env.morphism(name) {
        let rep = verify_morphism(m, bound)?;
        let witness = rep.witness.map(|(i, p)| {
            format!("{} -> {}", m.source.render_poly(&m.source.relations()[i]), m.target.render_poly(&p))
        });
        return Ok(vec![Check::new("respects relations", rep.verdict, witness)]);
    }
    if let Ok(f) = env.basis_map(name) {
        let elems = f.source.level_chain()?.level(bound.min(4));
        let ok = f.check_multiplicative(&elems)?;
        return Ok(vec![Check::new("multiplicative", if ok { Verdict::Verified } else { Verdict::Refuted }, None)]);
    }
    if let Some(c) = env.bases.get(name) {
        let (verdict, witness) = verdict_of(c.validate_structure(bound.min(4)))?;
        return Ok(vec![Check::new("associative and unital", verdict, witness)]);
    }
    if env.presentation(name).is_ok() {
        return Ok(vec![Check::new("presentation", Verdict::Verified, None)]);
    }
    Err(Error::Invalid(format!("nothing named `{name}`")))
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with(argv: Vec<String>) -> i32 {
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let result = run(&args);
    let code = match result {
        Ok(r) => {
            let out = r.render(args.format);
            let written = match &args.out {
                Some(path) => std::fs::write(path, &out).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{out}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => r.exit_code(),
                Err(msg) => {
                    eprintln!("error: {msg}");
                    3
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    };
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    code
}
