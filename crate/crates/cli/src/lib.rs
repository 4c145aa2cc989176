//! The `superform` command line.
//!
//! Exit codes: 0 success or "yes", 1 "no", 2 input error, 3 verification
//! failure (witness residual, axiom defect, golden mismatch).

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::json;
use similar::TextDiff;

use superform::format::{transform_to_text, FormFile};
use superform::fock::{osp_action_check, representation_check, FockVariant};
use superform::group::{act, random_matrix, random_pair, seeded_rng};
use superform::invariants::{p_coeff_formula, p_coeff_sign, q_poly, relation_check, signature};
use superform::reduction::{
    canonical_matrix, classify_labels, classify_with, equivalent, CanonicalDecomposition, CanonicalLabel, Mode, Tag,
};
use superform::superalgebra::{check_super_axioms, oscillator_algebra, SuperAlgebra, Violation};
use superform::superspace::{make_standard_gram, parity_reverse_blocks, Flavor};
use superform::uea::{
    adjoint_ideal_check, bracket_table, cocycle_from_table, osp_generators, standard_trivializing_map,
    triviality_check, BracketTable, Uea, OSP_NAMES,
};
use superform::{ApproxContext, Error, ExactScalar, Matrix};

#[derive(Parser, Debug)]
#[command(name = "superform", version, about = "Classify inhomogeneous supersymmetric bilinear forms")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Arithmetic for witnesses.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,

    /// Tolerance for approximate witnesses.
    #[arg(long, global = true, default_value_t = 1e-30)]
    eps: f64,

    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    #[arg(long, global = true)]
    json: bool,

    /// Append Fock-module checks at this truncation degree.
    #[arg(long, global = true)]
    fock_degree: Option<usize>,

    /// Where golden files live (default: the crate's golden/ directory).
    #[arg(long, global = true)]
    golden_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Auto,
    Exact,
    Approx,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orbit invariants of the coupling block.
    Invariants { form: PathBuf },
    /// Canonical decomposition with a transformation witness.
    Classify {
        form: PathBuf,
        /// Write the witness (X, Y) to this file.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Exit 0 if the two forms are equivalent, 1 if not.
    Equivalent { a: PathBuf, b: PathBuf },
    /// The classification table of irreducible forms.
    Table {
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        update_golden: bool,
    },
    /// Structure constants of the oscillator superalgebra of a form.
    Algebra {
        form: PathBuf,
        #[arg(long)]
        verify: bool,
    },
    /// osp(1|2) inside the homogeneous and inhomogeneous oscillator algebras.
    OspDemo {
        #[arg(long)]
        table_only: bool,
        #[arg(long)]
        update_golden: bool,
    },
    /// Randomized property suite plus golden-file comparison.
    Selftest,
}

enum Failure {
    Input(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Verification(m) => Failure::Verification(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<u8, Failure>;

struct Ctx<'a> {
    cli: &'a Cli,
    out: String,
}

impl Ctx<'_> {
    fn approx(&self) -> ApproxContext {
        ApproxContext { eps: self.cli.eps, ..ApproxContext::default() }
    }

    fn mode(&self) -> Mode {
        match self.cli.mode {
            ModeArg::Auto => Mode::Auto(self.approx()),
            ModeArg::Exact => Mode::Exact,
            ModeArg::Approx => Mode::Approx(self.approx()),
        }
    }

    fn golden_dir(&self) -> PathBuf {
        self.cli
            .golden_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/golden")))
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.out.push_str(s.as_ref());
        self.out.push('\n');
    }

    fn json(&mut self, v: serde_json::Value) {
        let text = serde_json::to_string_pretty(&v).expect("json value");
        self.line(text);
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut ctx = Ctx { cli: &cli, out: String::new() };
    let result = dispatch(&mut ctx);
    let _ = out.write_all(ctx.out.as_bytes());
    match result {
        Ok(code) => code,
        Err(Failure::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Verification(m)) => {
            let _ = writeln!(err, "verification failed: {m}");
            3
        }
    }
}

fn dispatch(ctx: &mut Ctx) -> Outcome {
    match &ctx.cli.command {
        Command::Invariants { form } => invariants(ctx, form),
        Command::Classify { form, witness } => classify(ctx, form, witness.as_deref()),
        Command::Equivalent { a, b } => equivalent_cmd(ctx, a, b),
        Command::Table { verify, update_golden } => table(ctx, *verify, *update_golden),
        Command::Algebra { form, verify } => algebra(ctx, form, *verify),
        Command::OspDemo { table_only, update_golden } => osp_demo(ctx, *table_only, *update_golden),
        Command::Selftest => selftest(ctx),
    }
}

fn read_coupling(path: &Path) -> Result<Matrix<ExactScalar>, Failure> {
    Ok(FormFile::read(path)?.coupling_block()?)
}

fn join(v: &[ExactScalar]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn invariants(ctx: &mut Ctx, path: &Path) -> Outcome {
    let b = read_coupling(path)?;
    let sig = signature(&b)?;
    let q = q_poly(&b)?;
    let sign = relation_check(&b)?;
    let pair_sum = if sig.k >= 2 { Some(p_coeff_formula(&b)?) } else { None };
    if ctx.cli.json {
        ctx.json(json!({
            "signature": sig,
            "q_coeffs": q.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "relation_sign": sign,
            "pair_minor_sum": pair_sum.as_ref().map(ToString::to_string),
        }));
        return Ok(0);
    }
    ctx.line(format!("shape: k={} 2l={}", sig.k, sig.two_ell));
    ctx.line(format!("P_B: {}", join(&sig.p_coeffs)));
    ctx.line(format!("Q_B: {}", join(&q)));
    ctx.line(format!("rank: {}", sig.rank));
    ctx.line(format!("isotropic columns: {}", sig.isotropic_columns));
    ctx.line(format!("P_B(0): {}", sig.p0));
    ctx.line(format!("Q_B(0): {}", sig.q0));
    ctx.line(format!("relation sign: {:+}", sign));
    if let Some(s) = pair_sum {
        ctx.line(format!("pair-minor sum: {s} (sign (-1)^k = {:+})", p_coeff_sign(sig.k)));
    }
    Ok(0)
}

fn parts_text(d: &[CanonicalLabel]) -> String {
    d.iter().map(ToString::to_string).collect::<Vec<_>>().join(" + ")
}

fn verify_witness(ctx: &Ctx, d: &CanonicalDecomposition) -> Result<(), Failure> {
    let limit = if d.witness.is_exact() { 0.0 } else { ctx.cli.eps };
    if d.residual > limit {
        return Err(Failure::Verification(format!("witness residual {:e} exceeds {:e}", d.residual, limit)));
    }
    Ok(())
}

fn residual_text(r: f64) -> String {
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r:.3e}")
    }
}

fn classify(ctx: &mut Ctx, path: &Path, witness: Option<&Path>) -> Outcome {
    let b = read_coupling(path)?;
    let d = classify_with(&b, ctx.mode())?;
    let (x, y) = d.witness.exact_rows();
    if let Some(w) = witness {
        std::fs::write(w, transform_to_text(&x, &y))
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", w.display())))?;
    }
    let verified = verify_witness(ctx, &d);
    if ctx.cli.json {
        let rows = |m: &Matrix<ExactScalar>| {
            m.row_vecs().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>()
        };
        ctx.json(json!({
            "parts": d.parts.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "irreducible": d.is_irreducible(),
            "exact": d.witness.is_exact(),
            "residual": d.residual,
            "witness": { "X": rows(&x), "Y": rows(&y) },
        }));
    } else {
        let kind = if d.is_irreducible() { "irreducible" } else { "decomposition" };
        ctx.line(format!("{kind}: {}", parts_text(&d.parts)));
        ctx.line(format!("witness: {}", if d.witness.is_exact() { "exact" } else { "approximate" }));
        if let Some(w) = witness {
            ctx.line(format!("witness file: {}", w.display()));
        }
        ctx.line(format!("residual: {}", residual_text(d.residual)));
    }
    verified.map(|_| 0)
}

fn equivalent_cmd(ctx: &mut Ctx, a: &Path, b: &Path) -> Outcome {
    let (ba, bb) = (read_coupling(a)?, read_coupling(b)?);
    let answer = match equivalent(&ba, &bb) {
        Ok(v) => v,
        Err(Error::Shape(_)) => false,
        Err(e) => return Err(e.into()),
    };
    let (la, lb) = (classify_labels(&ba)?, classify_labels(&bb)?);
    if ctx.cli.json {
        ctx.json(json!({ "equivalent": answer, "a": parts_text(&la), "b": parts_text(&lb) }));
    } else {
        ctx.line(format!("a: {}", parts_text(&la)));
        ctx.line(format!("b: {}", parts_text(&lb)));
        ctx.line(if answer { "equivalent" } else { "not equivalent" });
    }
    Ok(if answer { 0 } else { 1 })
}

fn table_labels() -> Vec<CanonicalLabel> {
    let s = |t: &str| t.parse::<ExactScalar>().expect("literal");
    let mut out = vec![CanonicalLabel::new(Tag::B1).expect("tag")];
    for a in ["2", "1+i", "i"] {
        out.push(CanonicalLabel::b2(s(a)).expect("alpha in C+"));
    }
    for t in [Tag::B3, Tag::B4, Tag::B5, Tag::B6] {
        out.push(CanonicalLabel::new(t).expect("tag"));
    }
    out
}

fn table_text() -> Result<String, Failure> {
    let mut out = String::new();
    for l in table_labels() {
        let b = canonical_matrix(&l)?;
        let sig = signature(&b)?;
        let _ = writeln!(
            out,
            "{:<16} k={} 2l={} rank={} isotropic={} P=[{}]",
            l.to_string(),
            sig.k,
            sig.two_ell,
            sig.rank,
            sig.isotropic_columns,
            join(&sig.p_coeffs)
        );
    }
    Ok(out)
}

/// Classifies every canonical block and checks same-shape blocks are
/// pairwise inequivalent.
fn verify_table() -> Result<(), Failure> {
    let labels = table_labels();
    for l in &labels {
        let d = classify_with(&canonical_matrix(l)?, Mode::Exact)?;
        if d.parts != [l.clone()] || d.residual != 0.0 {
            return Err(Failure::Verification(format!("{l} classifies as {}", parts_text(&d.parts))));
        }
    }
    for (i, a) in labels.iter().enumerate() {
        for b in &labels[i + 1..] {
            if a.dims() == b.dims() && equivalent(&canonical_matrix(a)?, &canonical_matrix(b)?)? {
                return Err(Failure::Verification(format!("{a} and {b} are equivalent")));
            }
        }
    }
    Ok(())
}

fn golden_check(ctx: &mut Ctx, name: &str, actual: &str, update: bool) -> Result<bool, Failure> {
    let path = ctx.golden_dir().join(name);
    if update {
        std::fs::write(&path, actual).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
        return Ok(true);
    }
    let expected = std::fs::read_to_string(&path)
        .map_err(|e| Failure::Verification(format!("cannot read golden file {}: {e}", path.display())))?;
    if expected == actual {
        return Ok(true);
    }
    let diff = TextDiff::from_lines(expected.as_str(), actual)
        .unified_diff()
        .header(&path.display().to_string(), "computed")
        .to_string();
    ctx.out.push_str(&diff);
    Ok(false)
}

fn table(ctx: &mut Ctx, verify: bool, update: bool) -> Outcome {
    let text = table_text()?;
    ctx.out.push_str(&text);
    if verify {
        verify_table()?;
    }
    if (verify || update) && !golden_check(ctx, "table.txt", &text, update)? {
        return Err(Failure::Verification("table differs from golden file".into()));
    }
    Ok(0)
}

fn skew_algebra(path: &Path) -> Result<SuperAlgebra, Failure> {
    let g = FormFile::read(path)?.gram()?;
    let g = match g.flavor() {
        Flavor::SkewSupersymmetric => g,
        Flavor::Supersymmetric => parity_reverse_blocks(&g),
    };
    Ok(oscillator_algebra(&g)?)
}

fn violation_text(alg: &SuperAlgebra, v: &Violation) -> String {
    let n = |i: &usize| alg.name(*i).to_string();
    match v {
        Violation::Parity { i, j, k } => format!("parity: [{}, {}] has a {} component", n(i), n(j), n(k)),
        Violation::SkewSymmetry { i, j, .. } => format!("skew symmetry fails for ({}, {})", n(i), n(j)),
        Violation::Jacobi { i, j, k, .. } => format!("Jacobi fails for ({}, {}, {})", n(i), n(j), n(k)),
    }
}

fn algebra(ctx: &mut Ctx, path: &Path, verify: bool) -> Outcome {
    let alg = skew_algebra(path)?;
    let report = verify.then(|| check_super_axioms(&alg));
    if ctx.cli.json {
        ctx.json(json!({
            "basis": alg.names(),
            "parities": alg.parities(),
            "brackets": alg.structure_lines(),
            "axioms": report,
        }));
    } else {
        for l in alg.structure_lines() {
            ctx.line(l);
        }
        if let Some(r) = &report {
            if r.is_ok() {
                ctx.line("axioms: ok");
            } else {
                for v in &r.violations {
                    ctx.line(violation_text(&alg, v));
                }
            }
        }
    }
    match report {
        Some(r) if !r.is_ok() => Err(Failure::Verification(format!("{} axiom violations", r.violations.len()))),
        _ => Ok(0),
    }
}

struct OspCase {
    variant: FockVariant,
    uea: Uea,
    table: BracketTable,
}

fn osp_cases() -> Result<Vec<OspCase>, Failure> {
    let mut out = Vec::new();
    for (c, variant) in [("0", FockVariant::Homogeneous), ("1", FockVariant::Inhomogeneous)] {
        let b = Matrix::parse(&[&[c], &["0"]])?;
        let alg = oscillator_algebra(&make_standard_gram(b, Flavor::SkewSupersymmetric)?)?;
        let uea = Uea::new(alg).with_central_unit("K")?;
        let table = bracket_table(&uea, &osp_generators(&uea)?)?;
        out.push(OspCase { variant, uea, table });
    }
    Ok(out)
}

fn osp_tables_text(cases: &[OspCase]) -> String {
    let mut out = String::new();
    for case in cases {
        let _ = writeln!(out, "{} brackets", case.variant);
        for l in case.table.lines() {
            let _ = writeln!(out, "  {l}");
        }
    }
    out
}

fn fock_lines(cases: &[OspCase], n: usize) -> Result<(Vec<String>, bool), Failure> {
    let mut lines = Vec::new();
    let mut ok = true;
    for case in cases {
        let rep = representation_check(case.uea.algebra(), case.variant, n)?;
        let gens = osp_generators(&case.uea)?;
        let osp = osp_action_check(&case.uea, &gens, &case.table, case.variant, n)?;
        ok &= rep.is_ok() && osp.is_ok();
        lines.push(format!(
            "fock N={n} {}: representation {} defects in {} identities, osp action {} defects in {} identities",
            case.variant,
            rep.defects.len(),
            rep.checked,
            osp.defects.len(),
            osp.checked
        ));
        for d in rep.defects.iter().chain(&osp.defects) {
            lines.push(format!("  {} fails on {}", d.identity, d.inputs.join(", ")));
        }
    }
    Ok((lines, ok))
}

fn osp_demo(ctx: &mut Ctx, table_only: bool, update: bool) -> Outcome {
    let cases = osp_cases()?;
    let tables = osp_tables_text(&cases);
    if update && !golden_check(ctx, "osp_tables.txt", &tables, true)? {
        unreachable!("updates always succeed");
    }
    if table_only {
        ctx.out.push_str(&tables);
        return Ok(0);
    }
    let inhomogeneous = &cases[1];
    let gamma = cocycle_from_table(&inhomogeneous.table)?;
    let trivial = triviality_check(&gamma, &standard_trivializing_map());
    let ideal = adjoint_ideal_check(&inhomogeneous.table);
    let fock = match ctx.cli.fock_degree {
        Some(n) => Some(fock_lines(&cases, n)?),
        None => None,
    };
    if ctx.cli.json {
        ctx.json(json!({
            "homogeneous": cases[0].table,
            "inhomogeneous": inhomogeneous.table,
            "gamma": gamma,
            "triviality": trivial,
            "adjoint_ideal": ideal,
            "fock": fock.as_ref().map(|(l, ok)| json!({ "lines": l, "ok": ok })),
        }));
    } else {
        ctx.out.push_str(&tables);
        ctx.line("cocycle (nonzero values)");
        for l in gamma.lines().into_iter().filter(|l| !l.ends_with("= 0")) {
            ctx.line(format!("  {l}"));
        }
        ctx.line("triviality: f(H) = f(E+) = f(E-) = 0, f(F+) = E+, f(F-) = H");
        ctx.line(format!("  {}/25 pairs pass", 25 - trivial.defects.len()));
        for d in &trivial.defects {
            ctx.line(format!("  defect at ({}, {})", OSP_NAMES[d.a], OSP_NAMES[d.b]));
        }
        ctx.line(format!("adjoint ideal: {}", if ideal { "ok" } else { "fails" }));
        if let Some((lines, _)) = &fock {
            for l in lines {
                ctx.line(l);
            }
        }
    }
    let fock_ok = fock.is_none_or(|(_, ok)| ok);
    if !trivial.is_trivial() || !ideal || !fock_ok {
        return Err(Failure::Verification("osp(1|2) checks failed".into()));
    }
    Ok(0)
}

fn random_shape<R: Rng>(rng: &mut R) -> (usize, usize) {
    loop {
        let k = rng.gen_range(1..=5);
        let ell = rng.gen_range(1..=3);
        if k + 2 * ell <= 7 {
            return (k, 2 * ell);
        }
    }
}

fn selftest(ctx: &mut Ctx) -> Outcome {
    let mut rng = seeded_rng(ctx.cli.seed);
    let mut results: Vec<(&str, usize, usize)> = Vec::new();

    let mut pass = 0;
    for _ in 0..30 {
        let (k, two_ell) = random_shape(&mut rng);
        let b = random_matrix(k, two_ell, &mut rng);
        let t = random_pair(k, two_ell, &mut rng)?;
        if signature(&b)? == signature(&act(&b, &t)?)? {
            pass += 1;
        }
    }
    results.push(("invariance", pass, 30));

    let mut pass = 0;
    for _ in 0..30 {
        let (k, two_ell) = random_shape(&mut rng);
        let b = random_matrix(k, two_ell, &mut rng);
        if let Ok(d) = classify_with(&b, ctx.mode()) {
            if verify_witness(ctx, &d).is_ok() {
                pass += 1;
            }
        }
    }
    results.push(("witness soundness", pass, 30));

    let labels = table_labels();
    let mut pass = 0;
    for l in &labels {
        let b = canonical_matrix(l)?;
        let (k, two_ell) = b.shape();
        let t = random_pair(k, two_ell, &mut rng)?;
        if classify_labels(&act(&b, &t)?)? == [l.clone()] {
            pass += 1;
        }
    }
    results.push(("orbit stability", pass, labels.len()));

    let mut pass = 0;
    for _ in 0..10 {
        let (k, two_ell) = random_shape(&mut rng);
        let c = random_matrix(two_ell, k, &mut rng);
        let alg = oscillator_algebra(&make_standard_gram(c, Flavor::SkewSupersymmetric)?)?;
        if check_super_axioms(&alg).is_ok() {
            pass += 1;
        }
    }
    results.push(("superalgebra axioms", pass, 10));

    let cases = osp_cases()?;
    let n = ctx.cli.fock_degree.unwrap_or(6);
    let (_, fock_ok) = fock_lines(&cases, n)?;
    results.push(("fock modules", usize::from(fock_ok), 1));

    let mut golden_ok = 0;
    let table = table_text()?;
    if verify_table().is_ok() && golden_check(ctx, "table.txt", &table, false)? {
        golden_ok += 1;
    }
    if golden_check(ctx, "osp_tables.txt", &osp_tables_text(&cases), false)? {
        golden_ok += 1;
    }
    results.push(("golden files", golden_ok, 2));

    let mut all = true;
    if ctx.cli.json {
        let rows: Vec<_> = results.iter().map(|(s, p, t)| json!({ "suite": s, "passed": p, "total": t })).collect();
        ctx.json(json!({ "version": env!("CARGO_PKG_VERSION"), "seed": ctx.cli.seed, "suites": rows }));
    } else {
        ctx.line(format!("superform {}", env!("CARGO_PKG_VERSION")));
        ctx.line(format!("seed: {}", ctx.cli.seed));
    }
    for (suite, p, t) in &results {
        all &= p == t;
        if !ctx.cli.json {
            ctx.line(format!("{suite}: {p}/{t} passed"));
        }
    }
    if all {
        Ok(0)
    } else {
        Err(Failure::Verification("selftest failures".into()))
    }
}
