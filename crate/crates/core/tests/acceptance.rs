//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Counts and structure maps are compared exactly.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;
use std::time::{Duration, Instant};

use mapscheme::basis_algebra::{BasisAlgebra, BasisHopfAlgebra, FiniteGroup};
use mapscheme::cli::parse_spec;
use mapscheme::equivariant::{
    build_equivariant_algebra, build_equivariant_tower, enumerate_equivariant_morphisms, BasisComodule, Coaction,
    PresentedComodule,
};
use mapscheme::exact_algebra::{FieldSpec, GeneratorImageMap, Lin, Presentation, Verdict};
use mapscheme::hopf_hom::{enumerate_hopf_points, PresentedHopf};
use mapscheme::hopf_mapping::pseudogroup::{gl1, sl2};
use mapscheme::hopf_mapping::tower::polynomial_coefficients;
use mapscheme::hopf_mapping::{build_hopf_tower, check_hopf_axioms, derive_structure, mutate, Mutation};
use mapscheme::mapping_core::{
    build_mapping_algebra, build_mapping_tower, enumerate_morphisms, enumerate_points, induced_promorphism,
    point_morphism_bijection, point_to_morphism, transport_exponential, transport_product, BasisMap, BasisRule,
    Correspondent, EnumOptions, MappingProblem, MappingTower,
};
use mapscheme::pro_tower::{compose_pro, ProMorphism, Tower, TowerPoint};

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;
/// Label, source, coefficients, level, and the expected count when one is pinned.
type OracleCase = (&'static str, Arc<Presentation>, Arc<BasisAlgebra>, usize, Option<usize>);

const BOUND: usize = 8;
const ORACLE_BUDGET: Duration = Duration::from_secs(10);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn specs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn pres(name: &str, f: FieldSpec, gens: &str, rels: &[&str]) -> Arc<Presentation> {
    Arc::new(Presentation::parse(name, f, gens, rels).expect("presentation parses"))
}

fn k2(f: FieldSpec) -> Arc<BasisAlgebra> {
    Arc::new(BasisAlgebra::diagonal("K2", f, 2))
}

fn poly_x(f: FieldSpec) -> Arc<BasisAlgebra> {
    Arc::new(polynomial_coefficients(f, 1))
}

/// Points of the level-`level` mapping algebra against brute-force morphisms, with
/// both directions of the point/morphism correspondence checked element by element.
fn oracle_instance(b: Arc<Presentation>, c: Arc<BasisAlgebra>, level: usize) -> Result<(usize, usize), String> {
    let opts = EnumOptions::default();
    let t = build_mapping_tower(b.clone(), c.clone(), level).map_err(err)?;
    let ma = t.level(level).map_err(err)?;
    let pts = enumerate_points(&ma.presentation, &opts).map_err(err)?;
    let l = c.level_chain().map_err(err)?.level(level);
    let brute = enumerate_morphisms(&b, &c, &l, &opts).map_err(err)?;

    let mut images = BTreeSet::new();
    for p in &pts {
        let point = Correspondent::Point(TowerPoint { level, assignment: p.clone() });
        match point_morphism_bijection(&t, &point).map_err(err)? {
            Correspondent::Morphism(m) => images.insert(m),
            Correspondent::Point(_) => return Err("a point converted to a point".into()),
        };
    }
    ensure(images.len() == pts.len(), "two points give the same morphism")?;
    let brute_set: BTreeSet<_> = brute.iter().cloned().collect();
    ensure(images == brute_set, "point images differ from the brute-force morphisms")?;

    let pts_set: BTreeSet<_> = pts.iter().cloned().collect();
    for m in &brute {
        let tp = match point_morphism_bijection(&t, &Correspondent::Morphism(m.clone())).map_err(err)? {
            Correspondent::Point(tp) => tp,
            Correspondent::Morphism(_) => return Err("a morphism converted to a morphism".into()),
        };
        let tp = if t.tower.is_stable() { tp } else { tp.lift(&t.tower, level).map_err(err)? };
        ensure(pts_set.contains(&tp.assignment), "the point of a morphism is not enumerated")?;
        let back = point_morphism_bijection(&t, &Correspondent::Point(tp)).map_err(err)?;
        ensure(back == Correspondent::Morphism(m.clone()), "round trip changes a morphism")?;
    }
    Ok((pts.len(), brute.len()))
}

fn load_spec(file: &str) -> mapscheme::cli::Env {
    let text = std::fs::read_to_string(specs_dir().join(file)).expect("spec file");
    parse_spec(&text).expect("spec parses").resolve().expect("spec resolves")
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let f2 = FieldSpec::Prime(2);
    let f3 = FieldSpec::Prime(3);
    let f5 = FieldSpec::Prime(5);
    let s3 = load_spec("s3.ms");
    let ks3 = s3.pseudogroup("KS3").map_err(err)?.b.clone();
    let cases: Vec<OracleCase> = vec![
        ("(a) idempotent into F2^2", pres("Idem", f2, "b", &["b*b - b"]), k2(f2), 0, Some(4)),
        ("(b) involution into F3^2", pres("Inv", f3, "g", &["g*g - 1"]), k2(f3), 0, Some(4)),
        ("(c) GL1 into F3[x] level 2", gl1(f3).b, poly_x(f3), 2, Some(2)),
        ("(d) SL2 into F2[x] level 1", sl2(f2).b, poly_x(f2), 1, None),
        ("(e) K[S3] into F5[x] level 1", ks3, poly_x(f5), 1, Some(2)),
    ];
    let mut parts = Vec::new();
    for (label, b, c, level, want) in cases {
        let (points, morphisms) = oracle_instance(b, c, level).map_err(|e| format!("{label}: {e}"))?;
        ensure(points == morphisms, format!("{label}: {points} points vs {morphisms} morphisms"))?;
        if let Some(w) = want {
            ensure(points == w, format!("{label}: {points} points, expected {w}"))?;
        }
        parts.push(format!("{label} {points}={morphisms}"));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < ORACLE_BUDGET, format!("took {:.2}s", elapsed.as_secs_f64()))?;
    Ok(format!("{}; {:.2}s", parts.join(", "), elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let f = FieldSpec::Rationals;
    let mut compared = 0;
    for (name, pg) in [("GL1", gl1(f)), ("SL2", sl2(f))] {
        for m in [1, 2] {
            let h = build_hopf_tower(&pg, m, 1).map_err(err)?;
            let d = derive_structure(&h.mapping, &h.data, &h.square, 2).map_err(err)?;
            for p in 0..=2 {
                let at = format!("{name} m={m} p={p}");
                let (a, b) = (h.comul.member_into(p).map_err(err)?, d.comul.member_into(p).map_err(err)?);
                ensure(a.source_level == b.source_level, format!("{at}: comultiplication source levels differ"))?;
                ensure(a.map.images == b.map.images, format!("{at}: comultiplication differs"))?;
                let (a, b) = (h.counit.member_into(p).map_err(err)?, d.counit.member_into(p).map_err(err)?);
                ensure(a.map.images == b.map.images, format!("{at}: counit differs"))?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} level pairs identical"))
}

fn criterion_3() -> Outcome {
    let f = FieldSpec::Rationals;
    let mut parts = Vec::new();
    for (name, pg, p_max) in [("GL1", gl1(f), 3), ("SL2", sl2(f), 2)] {
        let h = build_hopf_tower(&pg, 1, p_max).map_err(err)?;
        let rep = check_hopf_axioms(&h, BOUND, p_max).map_err(err)?;
        for c in rep.checks() {
            ensure(c.verdict == Verdict::Verified, format!("{name}: {} is {:?}", c.name, c.verdict))?;
        }
        for m in [Mutation::ComulSign, Mutation::CounitShift, Mutation::AntipodeSign] {
            let rep = check_hopf_axioms(&mutate(&h, m), BOUND, p_max).map_err(err)?;
            ensure(rep.verdict() == Verdict::Refuted, format!("{name}: mutant {m:?} gives {:?}", rep.verdict()))?;
        }
        parts.push(format!("{name} p<={p_max} verified, 3 mutants refuted"));
    }
    Ok(parts.join("; "))
}

fn criterion_4() -> Outcome {
    let f = FieldSpec::Rationals;
    let levels = [0, 1, 2, 3];
    let c = poly_x(f);
    let t = build_mapping_tower(gl1(f).b, c.clone(), 3).map_err(err)?;
    let id_b = GeneratorImageMap::identity(t.b.clone());
    let swap = GeneratorImageMap::from_named(t.b.clone(), t.b.clone(), &[("t", "s"), ("s", "t")]).map_err(err)?;
    let id_c = BasisMap::identity(c.clone());
    let origin = BasisMap { source: c.clone(), target: c.clone(), rule: BasisRule::Variables(vec![Lin::zero(f)]) };
    let compatible =
        |m: &ProMorphism| -> Result<bool, String> { Ok(m.check_compatibility(BOUND).map_err(err)?.is_compatible()) };

    let ind = induced_promorphism(&id_b, &id_c, &t, &t, &levels).map_err(err)?;
    let id = ProMorphism::identity(t.tower.clone(), 3).map_err(err)?;
    ensure(compatible(&ind.union(&id).map_err(err)?)?, "A(id, id) is not equivalent to the identity")?;

    let mut cases = 0;
    for (g1, g2) in [(&id_b, &id_b), (&swap, &id_b), (&id_b, &swap)] {
        for (f1, f2) in [(&origin, &id_c), (&id_c, &origin)] {
            let phi = induced_promorphism(g1, f1, &t, &t, &levels).map_err(err)?;
            let psi = induced_promorphism(g2, f2, &t, &t, &levels).map_err(err)?;
            let composed = compose_pro(&psi, &phi, &levels).map_err(err)?;
            let direct = induced_promorphism(&g1.then(g2).map_err(err)?, &f2.then(f1).map_err(err)?, &t, &t, &levels)
                .map_err(err)?;
            ensure(
                compatible(&composed.union(&direct).map_err(err)?)?,
                format!("composition law fails in case {cases}"),
            )?;
            cases += 1;
        }
    }
    Ok(format!("identity law and {cases} composition cases compatible"))
}

fn criterion_5() -> Outcome {
    let q = FieldSpec::Rationals;
    let f3 = FieldSpec::Prime(3);
    let mut towers: Vec<(String, Arc<Tower>)> = Vec::new();
    let mut push = |t: &MappingTower| towers.push((t.tower.name.clone(), t.tower.clone()));
    let gl = build_mapping_tower(gl1(q).b, poly_x(q), 4).map_err(err)?;
    push(&gl);
    push(&gl.commutativized().map_err(err)?);
    push(&build_mapping_tower(sl2(q).b, poly_x(q), 4).map_err(err)?);
    push(&build_mapping_tower(gl1(q).b, Arc::new(polynomial_coefficients(q, 2)), 4).map_err(err)?);
    push(&build_mapping_tower(pres("Idem", q, "b", &["b*b - b"]), k2(q), 4).map_err(err)?);

    let h = Arc::new(BasisHopfAlgebra::group_algebra("H", f3, FiniteGroup::cyclic(2).map_err(err)?));
    let v = BasisComodule { v: poly_x(f3), h: h.clone(), coaction: Coaction::Grading(vec![1]) };
    let w = PresentedComodule::trivial(Arc::new(Presentation::free("W", f3, &["w"])), h);
    push(&build_equivariant_tower(&w, &v, 4).map_err(err)?);

    let hopf = build_hopf_tower(&gl1(q), 1, 2).map_err(err)?;
    towers.push(("square".into(), hopf.square.clone()));
    towers.push(("hopf mapping".into(), hopf.mapping.tower.clone()));

    for (name, t) in &towers {
        let v = t.check_coherence(4, BOUND).map_err(err)?;
        ensure(v == Verdict::Verified, format!("{name}: {v:?}"))?;
    }
    Ok(format!("{} towers coherent up to level 4", towers.len()))
}

fn criterion_6() -> Outcome {
    let opts = EnumOptions::default();
    let mut parts = Vec::new();
    for (b, p) in [(("Idem", "b", "b*b - b"), 2), (("Inv", "g", "g*g - 1"), 3)] {
        let f = FieldSpec::Prime(p);
        let b1 = pres(b.0, f, b.1, &[b.2]);
        let b2 = pres(&format!("{}2", b.0), f, b.1, &[b.2]);
        let r = transport_product(b1, b2, k2(f), &opts).map_err(err)?;
        ensure(r.right1 == 4 && r.right2 == 4, format!("{}: factors {} and {}", b.0, r.right1, r.right2))?;
        ensure(r.left == 16 && r.holds(), format!("{}: {r:?}", b.0))?;
        parts.push(format!("{} {}={}*{}", b.0, r.left, r.right1, r.right2));
    }
    Ok(parts.join(", "))
}

fn criterion_7() -> Outcome {
    let f = FieldSpec::Prime(2);
    let opts = EnumOptions::default();
    let r = transport_exponential(pres("Idem", f, "b", &["b*b - b"]), k2(f), k2(f), &opts).map_err(err)?;
    ensure(r.left == 16 && r.right == 16 && r.holds(), format!("idempotent: {r:?}"))?;
    let free = Arc::new(Presentation::free("Free", f, &["b"]));
    let s = transport_exponential(free, k2(f), k2(f), &opts).map_err(err)?;
    ensure(s.holds(), format!("free: {s:?}"))?;
    Ok(format!("idempotent {}={}, free {}={}", r.left, r.right, s.left, s.right))
}

fn criterion_8() -> Outcome {
    let f = FieldSpec::Prime(3);
    let opts = EnumOptions::default();
    let h = Arc::new(BasisHopfAlgebra::group_algebra("H", f, FiniteGroup::cyclic(2).map_err(err)?));
    let v = BasisComodule::regular(h.clone()).map_err(err)?;
    let wp = pres("W", f, "w", &["w*w - 1"]);
    let u1 = h.algebra().parse_label("u1").map_err(err)?;
    let w = PresentedComodule { w: wp.clone(), h: h.clone(), coaction: vec![vec![(wp.var(0), u1)]] };
    let l = v.v.basis().map_err(err)?;
    let a = build_equivariant_algebra(&w, &v, &l).map_err(err)?;
    let pts = enumerate_points(&a.presentation, &opts).map_err(err)?;
    let from_points: BTreeSet<_> =
        pts.iter().map(|p| point_to_morphism(&a, p)).collect::<Result<_, _>>().map_err(err)?;
    let filtered: BTreeSet<_> = enumerate_equivariant_morphisms(&w, &v, &l, &opts).map_err(err)?.into_iter().collect();
    let plain = enumerate_morphisms(&wp, &v.v, &l, &opts).map_err(err)?.len();
    ensure(pts.len() == 2 && plain == 4, format!("{} equivariant points, {plain} plain", pts.len()))?;
    ensure(from_points == filtered, "points differ from the filtered enumeration")?;

    let vt = BasisComodule { v: k2(f), h: h.clone(), coaction: Coaction::Trivial };
    let wt = PresentedComodule::trivial(wp.clone(), h);
    let lt = vt.v.basis().map_err(err)?;
    let ordinary = build_mapping_algebra(&MappingProblem::uniform(wp, vt.v.clone(), &lt).map_err(err)?).map_err(err)?;
    let dagger = build_equivariant_algebra(&wt, &vt, &lt).map_err(err)?;
    ensure(*ordinary.presentation == *dagger.presentation, "trivial coaction changes the presentation")?;
    Ok(format!("{} equivariant vs {plain} plain, trivial coaction presentation-equal", pts.len()))
}

fn criterion_9() -> Outcome {
    let opts = EnumOptions::default();
    let mut parts = Vec::new();
    for (m, n, p, want) in [(3, 3, 7, 3), (2, 3, 7, 1), (2, 2, 3, 2)] {
        let f = FieldSpec::Prime(p);
        let h1 = PresentedHopf::cyclic(&format!("C{m}"), f, m, "g").map_err(err)?;
        let h2 = BasisHopfAlgebra::group_algebra(format!("Z{n}"), f, FiniteGroup::cyclic(n).map_err(err)?);
        let l = h2.algebra().basis().map_err(err)?;
        let r = enumerate_hopf_points(&h1, &h2, &l, &opts).map_err(err)?;
        let label = format!("Z{m}->Z{n} over F{p}");
        ensure(r.points.len() == want, format!("{label}: {} points, expected {want}", r.points.len()))?;
        ensure(r.bijection() == Some(true), format!("{label}: no bijection with group homomorphisms"))?;
        parts.push(format!("{label} {}", r.points.len()));
    }
    Ok(parts.join(", "))
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mapscheme")).args(args).output().expect("binary runs")
}

fn verdict_line(out: &Output) -> Option<String> {
    String::from_utf8_lossy(&out.stdout).lines().rev().find_map(|l| l.strip_prefix("verdict: ").map(str::to_string))
}

fn expected_code(verdict: Option<&str>) -> i32 {
    match verdict {
        Some("refuted") => 1,
        Some("inconclusive") => 2,
        _ => 0,
    }
}

fn criterion_10() -> Outcome {
    let scratch = std::env::temp_dir().join(format!("mapscheme-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&scratch).map_err(err)?;
    let mut corpus: Vec<PathBuf> = std::fs::read_dir(specs_dir())
        .map_err(err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "ms"))
        .collect();
    corpus.sort();
    ensure(!corpus.is_empty(), "empty corpus")?;
    for path in &corpus {
        let first = cli(&["roundtrip", "--spec", path.to_str().unwrap(), "--format", "json"]);
        ensure(
            first.status.code() == Some(0),
            format!("{}: roundtrip exit {:?}", path.display(), first.status.code()),
        )?;
        let json: serde_json::Value = serde_json::from_slice(&first.stdout).map_err(err)?;
        let rendered = json["rendered"].as_str().ok_or("no rendered text")?.to_string();
        let copy = scratch.join(path.file_name().unwrap());
        std::fs::write(&copy, &rendered).map_err(err)?;
        let second = cli(&["roundtrip", "--spec", copy.to_str().unwrap(), "--format", "json"]);
        let json2: serde_json::Value = serde_json::from_slice(&second.stdout).map_err(err)?;
        ensure(
            json2["rendered"].as_str() == Some(rendered.as_str()),
            format!("{}: render is not idempotent", path.display()),
        )?;
        ensure(
            json2["fixed_point"] == serde_json::Value::Bool(true),
            format!("{}: not a fixed point", path.display()),
        )?;
    }

    let runs: [(&str, i32); 18] = [
        ("points --spec @finite.ms -B Idem -C K2", 0),
        ("points --spec @finite.ms --field F3 -B Inv -C K2", 0),
        ("points --spec @gl1.ms --field F3 -B GL1 -C PolyX --level 2", 0),
        ("points --spec @sl2.ms --field F2 -B SL2 -C PolyX", 0),
        ("points --spec @s3.ms -B KS3 -C PolyX", 0),
        ("check-hopf --spec @gl1.ms -B GL1 --pmax 3", 0),
        ("check-hopf --spec @sl2.ms -B SL2 --pmax 2", 0),
        ("tower --spec @gl1.ms -B GL1 -C PolyX --level 4", 0),
        ("induced --spec @gl1.ms -B id -C origin --level 3", 0),
        ("equivariant --spec @z2.ms -B Wg -C V", 0),
        ("homscheme --spec @homs.ms -B C3 -C Z3", 0),
        ("homscheme --spec @homs.ms -B C2 -C Z3", 0),
        ("homscheme --spec @homs.ms --field F3 -B C2 -C Z2", 0),
        ("check-laws --spec %broken_antipode.ms -B Bad", 1),
        ("check-hopf --spec %broken_antipode.ms -B Bad", 1),
        ("check-laws --spec %braid.ms -B f", 2),
        ("roundtrip --spec %dangling.ms", 3),
        ("points --spec @missing.ms -B B -C C", 3),
    ];
    let expand = |word: &str| match (word.strip_prefix('@'), word.strip_prefix('%')) {
        (Some(f), _) => specs_dir().join(f).to_string_lossy().into_owned(),
        (_, Some(f)) => fixture(f).to_string_lossy().into_owned(),
        _ => word.to_string(),
    };
    let mut codes = [0usize; 4];
    for (shown, want) in runs {
        let args: Vec<String> = shown.split_whitespace().map(expand).collect();
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = cli(&argv);
        let b = cli(&argv);
        ensure(a.stdout == b.stdout, format!("`{shown}`: reruns differ"))?;
        let code = a.status.code().ok_or("killed by a signal")?;
        ensure(code == want, format!("`{shown}`: exit {code}, expected {want}"))?;
        if code != 3 {
            let v = verdict_line(&a);
            ensure(code == expected_code(v.as_deref()), format!("`{shown}`: exit {code} with verdict {v:?}"))?;
        }
        codes[code as usize] += 1;
    }
    let _ = std::fs::remove_dir_all(&scratch);
    Ok(format!(
        "{} specs round-trip, {} commands rerun identically, exit codes 0/1/2/3 seen {:?}",
        corpus.len(),
        runs.len(),
        codes
    ))
}

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("universal-property oracle suite", criterion_1),
        ("explicit and derived structure maps agree", criterion_2),
        ("Hopf axioms verified, mutants refuted", criterion_3),
        ("functor laws", criterion_4),
        ("tower coherence", criterion_5),
        ("product law", criterion_6),
        ("exponential law", criterion_7),
        ("equivariant oracle", criterion_8),
        ("hom-scheme oracle", criterion_9),
        ("command line", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}: {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name} ({why}) [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
