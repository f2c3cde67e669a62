use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qgw::coideal::{brute_force_coideals, count_comparison, embeddable_classification, group_like_comodules, LabelMatcher, MatchResult};
use qgw::corep::{irreducible_reps, Comodule, Irreps};
use qgw::ergodic::classify_ergodic;
use qgw::error::QgwError;
use qgw::groups::{dihedral_order, function_algebra, group_algebra, make_group, FiniteGroup, GroupKind};
use qgw::hopf::{check_cqg_with, is_kac, verify_hopf, DEFAULT_PRECISION};
use qgw::o2sym::{dinf_tame_mult, embeddable_table, induced_mult, scan_regular_candidates, InducingModule, MultVector, O2Subgroup, Param, Verdict};
use qgw::qgw1::Document;
use qgw::twist::{dihedral_minus_one_full, twist, verify_cocycle};

#[derive(Parser, Debug)]
#[command(name = "qgw", version, about = "Exact computations with finite quantum groups of dihedral type")]
struct Cli {
    /// Worker threads; defaults to the number of available cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Bits of precision for positivity checks.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Write the result here instead of stdout. Nothing is written on failure.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Markdown,
    #[value(name = "qgw-1")]
    Qgw1,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum AlgebraKind {
    /// F(D_K)
    Function,
    /// ℂD_K
    Group,
    /// (D_K)₋₁
    Twisted,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a qgw-1 file for F(D_K), ℂD_K or (D_K)₋₁.
    Build {
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "algebra")]
        twisted: bool,
        #[arg(long, value_enum)]
        algebra: Option<AlgebraKind>,
    },
    /// Run the certificate suite on a qgw-1 file.
    Verify { file: PathBuf },
    /// Ergodic census and embeddable classification for one K.
    Classify {
        #[arg(long)]
        k: usize,
        /// With --format qgw-1: emit the twisted algebra and its coideals.
        #[arg(long)]
        twisted: bool,
    },
    /// Classical against twisted embeddable counts over a range of K.
    Count {
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
    },
    /// Symbolic O(2) computations.
    O2 {
        #[command(subcommand)]
        op: O2Command,
    },
    /// Brute-force census of coideal subalgebras (dimension at most 8).
    Oracle {
        /// dihedral:K, cyclic:N or klein
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = AlgebraKind::Function)]
        algebra: AlgebraKind,
    },
}

#[derive(Subcommand, Debug)]
enum O2Command {
    /// Labels whose truncated multiplicity vector is the regular one.
    ScanRegular {
        #[arg(long)]
        k_bound: usize,
        /// Defaults to ⌊k_bound/2⌋.
        #[arg(long)]
        l_bound: Option<usize>,
        #[arg(long, default_value_t = 24)]
        cutoff: usize,
    },
    /// Embeddability verdicts for labels up to the bounds.
    Table {
        #[arg(long)]
        k_bound: usize,
        #[arg(long)]
        l_bound: Option<usize>,
    },
    /// Tame multiplicity vector from D_∞ words next to the induced one.
    Tame {
        /// Even integer or "inf".
        #[arg(long)]
        k: String,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 24)]
        cutoff: usize,
    },
}

enum Failure {
    Usage(String),
    Error(QgwError),
    /// A certificate failed; the report is still printed.
    Certificate { module: &'static str, witness: String, report: String },
}

impl From<QgwError> for Failure {
    fn from(e: QgwError) -> Failure {
        match e {
            // Out-of-range parameters are usage errors, not computation failures.
            QgwError::BadParams(_) | QgwError::BadDivisor { .. } | QgwError::NoKleinSubgroup(_) | QgwError::OracleLimit(_) => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Error(e),
        }
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    code: &'a str,
    module: &'a str,
    witness: String,
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Table {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> Result<String, Failure> {
        let mut s = String::new();
        match format {
            Format::Tsv => {
                for r in std::iter::once(&self.header).chain(&self.rows) {
                    s.push_str(&r.join("\t"));
                    s.push('\n');
                }
            }
            Format::Markdown => {
                let line = |r: &[String]| format!("| {} |\n", r.iter().map(|c| c.replace('|', "\\|")).collect::<Vec<_>>().join(" | "));
                s.push_str(&line(&self.header));
                s.push_str(&line(&vec!["---".to_string(); self.header.len()]));
                for r in &self.rows {
                    s.push_str(&line(r));
                }
            }
            Format::Qgw1 => return Err(Failure::Usage("this command emits tables; use --format tsv or markdown".into())),
        }
        Ok(s)
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_param(s: &str) -> Result<Param, Failure> {
    if s == "inf" {
        return Ok(Param::Infinity);
    }
    s.parse().map(Param::Finite).map_err(|_| Failure::Usage(format!("expected an integer or \"inf\", got {:?}", s)))
}

fn parse_group(s: &str) -> Result<FiniteGroup, Failure> {
    let bad = || Failure::Usage(format!("unknown group {:?}; use dihedral:K, cyclic:N or klein", s));
    let kind = match s.split_once(':') {
        None if s == "klein" => GroupKind::Klein,
        Some(("dihedral", n)) => GroupKind::Dihedral(n.parse().map_err(|_| bad())?),
        Some(("cyclic", n)) => GroupKind::Cyclic(n.parse().map_err(|_| bad())?),
        _ => return Err(bad()),
    };
    if matches!(kind, GroupKind::Dihedral(0) | GroupKind::Cyclic(0)) {
        return Err(bad());
    }
    Ok(make_group(kind))
}

fn group_order(g: &FiniteGroup) -> u32 {
    match g.kind {
        GroupKind::Dihedral(k) => dihedral_order(k),
        GroupKind::Cyclic(n) => dihedral_order(n),
        _ => 4,
    }
}

/// The algebra, its group and (for the twist) the cocycle, as a qgw-1 document.
fn build_document(k: usize, kind: AlgebraKind) -> Result<Document, Failure> {
    if k == 0 {
        return Err(Failure::Usage("K must be positive".into()));
    }
    let g = make_group(GroupKind::Dihedral(k));
    let order = dihedral_order(k);
    let reps = irreducible_reps(&g, order)?;
    let doc = match kind {
        AlgebraKind::Function => {
            let h = function_algebra(&g, order);
            let irr: Vec<Comodule> = reps.iter().map(|r| Comodule::from_rep(&h, r)).collect();
            Document::from_hopf(&h).with_group(&g).with_comodules(&irr)
        }
        AlgebraKind::Group => {
            let h = group_algebra(&g, order);
            Document::from_hopf(&h).with_group(&g).with_comodules(&group_like_comodules(&h))
        }
        AlgebraKind::Twisted => {
            let t = dihedral_minus_one_full(k)?;
            let irr: Vec<Comodule> = reps.iter().map(|r| Comodule::from_rep(&t.hopf, r)).collect();
            Document::from_hopf(&t.hopf).with_group(&g).with_cocycle(&t.cocycle).with_comodules(&irr)
        }
    };
    Ok(doc)
}

fn verify_document(doc: &Document, precision: usize) -> Result<(String, Vec<String>), Failure> {
    let h = doc.to_hopf()?;
    let mut t = Table::new(["check", "result", "witness"]);
    let mut failed = Vec::new();
    let mut record = |t: &mut Table, name: String, witness: Option<String>| {
        let ok = witness.is_none();
        if !ok {
            failed.push(format!("{}: {}", name, witness.clone().unwrap_or_default()));
        }
        t.push(vec![name, if ok { "PASS" } else { "FAIL" }.into(), witness.unwrap_or_default()]);
    };

    for r in verify_hopf(&h)?.results {
        record(&mut t, format!("hopf.{}", r.axiom), r.witness);
    }
    let cert = check_cqg_with(&h, precision);
    let cqg_witness = (!cert.passed()).then(|| cert.failures.join("; "));
    record(&mut t, "cqg".into(), cqg_witness);
    t.push(vec!["haar.min_pivot".into(), "INFO".into(), format!("{:e}", cert.min_pivot)]);
    t.push(vec!["haar.lambda_min".into(), "INFO".into(), format!("{:e}", cert.lambda_min)]);
    if cert.haar_exists {
        let kac = is_kac(&h)?;
        record(&mut t, "kac".into(), (!kac).then(|| "Haar state is not tracial".to_string()));
    }

    let group = doc.group()?;
    if let Some(lam) = doc.cocycle(&h)? {
        match &group {
            Some(g) => {
                // The cocycle lives on F(G); twisting by it must reproduce the file.
                let classical = function_algebra(g, h.order());
                let lam = qgw::twist::Cocycle { parent: classical.fingerprint(), ..lam };
                record(&mut t, "cocycle.identity".into(), verify_cocycle(&classical, &lam).err());
                let same = match twist(&classical, &lam) {
                    Ok(tw) => (tw.algebra.mult != h.algebra.mult).then(|| "twisted product differs from the stored one".to_string()),
                    Err(e) => Some(e.to_string()),
                };
                record(&mut t, "cocycle.twist".into(), same);
            }
            None => record(&mut t, "cocycle".into(), Some("cocycle section needs a group section".into())),
        }
    }
    for (label, u) in doc.comodule_matrices()? {
        let m = Comodule::from_matrix(&h, u, label.clone());
        record(&mut t, format!("comodule.{}.comatrix", label), (!m.is_comatrix(&h)).then(|| "Δu ≠ u⊗u".to_string()));
        record(&mut t, format!("comodule.{}.unitary", label), (!m.unitary).then(|| "u*u ≠ 1".to_string()));
    }
    let bases = doc.coideal_bases()?;
    if !bases.is_empty() {
        let none = Irreps::new(&h, Vec::new())?;
        for (label, basis) in bases {
            let c = qgw::coideal::CoidealSubalgebra::from_span(&h, basis, &none);
            let cc = &c.certificates;
            let mut bad = Vec::new();
            for (ok, what) in [(cc.unital, "unit"), (cc.star_closed, "star"), (cc.product_closed, "product"), (cc.coideal, "coideal")] {
                if !ok {
                    bad.push(what);
                }
            }
            record(&mut t, format!("coideal.{}", label), (!bad.is_empty()).then(|| bad.join(",")));
        }
    }
    Ok((t.render(Format::Tsv)?, failed))
}

fn classify(k: usize, twisted: bool, format: Format) -> Result<String, Failure> {
    if format == Format::Qgw1 {
        let m = LabelMatcher::new(k, twisted)?;
        let cls = qgw::coideal::classify_with(&m)?;
        let mut doc = Document::from_hopf(&m.hopf).with_group(&m.group);
        if let Some(lam) = m.cocycle() {
            doc = doc.with_cocycle(lam);
        }
        for c in &cls.classes {
            doc.add_coideal(c.label.to_string(), &c.coideal.basis);
        }
        return Ok(doc.to_json());
    }
    let census = classify_ergodic(k)?;
    let classical = embeddable_classification(k, false)?;
    let twisted_cls = if k.is_multiple_of(2) { Some(embeddable_classification(k, true)?) } else { None };
    let mut t = Table::new(["label", "dim", "mult", "classical", "twisted"]);
    let find = |cls: &qgw::coideal::EmbeddableClassification, l| {
        cls.classes.iter().find(|c| c.label == l).map(|c| c.source.to_string()).unwrap_or_else(|| "-".into())
    };
    for a in &census.raw {
        t.push(vec![
            a.label.to_string(),
            a.dim().to_string(),
            join(&a.mult),
            find(&classical, a.label),
            twisted_cls.as_ref().map(|c| find(c, a.label)).unwrap_or_else(|| "n/a".into()),
        ]);
    }
    let mut s = t.render(format)?;
    let mut notes: Vec<String> = census.discrepancies.clone();
    notes.extend(census.merged.iter().map(|(a, b)| format!("{} is isomorphic to {}", a, b)));
    notes.extend(classical.findings.iter().map(|f| format!("classical: {}", f)));
    if let Some(c) = &twisted_cls {
        notes.extend(c.findings.iter().map(|f| format!("twisted: {}", f)));
    }
    let count = |c: &qgw::coideal::EmbeddableClassification| format!("{} ({} with unlabelled classes)", c.count(), c.raw_count());
    notes.push(format!("classical embeddable: {}", count(&classical)));
    if let Some(c) = &twisted_cls {
        notes.push(format!("twisted embeddable: {}", count(c)));
    }
    let prefix = if format == Format::Markdown { "\n" } else { "# " };
    for n in notes {
        let _ = writeln!(s, "{}{}", prefix, n);
    }
    Ok(s)
}

fn count(ks: &[usize], format: Format) -> Result<String, Failure> {
    let rows = count_comparison(ks)?;
    let mut t = Table::new(["K", "tau", "classical", "twisted", "classical_raw", "twisted_raw", "differ"]);
    for r in rows {
        t.push(vec![
            r.big_k.to_string(),
            r.tau.to_string(),
            r.classical.to_string(),
            r.twisted.to_string(),
            r.classical_raw.to_string(),
            r.twisted_raw.to_string(),
            r.differ.to_string(),
        ]);
    }
    t.render(format)
}

fn mult_table(cutoff: usize, rows: Vec<(String, MultVector)>, format: Format) -> Result<String, Failure> {
    let mut t = Table::new(MultVector::tsv_header(cutoff).split('\t').map(String::from).collect::<Vec<_>>());
    for (label, m) in rows {
        t.push(m.tsv_row(&label).split('\t').map(String::from).collect());
    }
    t.render(format)
}

fn o2(op: &O2Command, format: Format) -> Result<String, Failure> {
    match *op {
        O2Command::ScanRegular { k_bound, l_bound, cutoff } => {
            let hits = scan_regular_candidates(k_bound, l_bound.unwrap_or(k_bound / 2), cutoff)?;
            let rows = hits.iter().map(|l| Ok((l.to_string(), l.mult(cutoff)?))).collect::<Result<Vec<_>, QgwError>>()?;
            mult_table(cutoff, rows, format)
        }
        O2Command::Table { k_bound, l_bound } => {
            let mut t = Table::new(["label", "verdict", "reason"]);
            for e in embeddable_table(k_bound, l_bound.unwrap_or(k_bound / 2)) {
                let v = if e.verdict == Verdict::Embeddable { "embeddable" } else { "not-embeddable" };
                t.push(vec![e.label.to_string(), v.into(), e.reason.into()]);
            }
            t.render(format)
        }
        O2Command::Tame { ref k, l, cutoff } => {
            let kp = parse_param(k)?;
            let tame = dinf_tame_mult(kp, l, cutoff)?;
            let induced = induced_mult(O2Subgroup::Dihedral(kp), InducingModule::M2(l), cutoff)?;
            let agree = tame == induced;
            let mut s = mult_table(cutoff, vec![("tame".into(), tame), ("induced".into(), induced)], format)?;
            let prefix = if format == Format::Markdown { "\n" } else { "# " };
            let _ = writeln!(s, "{}agree: {}", prefix, agree);
            Ok(s)
        }
    }
}

fn oracle(group: &str, kind: AlgebraKind, format: Format) -> Result<String, Failure> {
    let g = parse_group(group)?;
    let order = group_order(&g);
    let matcher = match (kind, g.kind) {
        (AlgebraKind::Twisted, GroupKind::Dihedral(k)) => Some(LabelMatcher::new(k, true)?),
        (AlgebraKind::Function, GroupKind::Dihedral(k)) => Some(LabelMatcher::new(k, false)?),
        (AlgebraKind::Twisted, _) => return Err(Failure::Usage("the twist is defined for dihedral groups only".into())),
        _ => None,
    };
    let (h, irreps) = match (&matcher, kind) {
        (Some(m), _) => (m.hopf.clone(), None),
        (None, AlgebraKind::Group) => {
            let h = group_algebra(&g, order);
            let irr = Irreps::new(&h, group_like_comodules(&h))?;
            (h, Some(irr))
        }
        (None, _) => {
            let h = function_algebra(&g, order);
            let irr = Irreps::new(&h, irreducible_reps(&g, order)?.iter().map(|r| Comodule::from_rep(&h, r)).collect())?;
            (h, Some(irr))
        }
    };
    let irreps = irreps.as_ref().or(matcher.as_ref().map(|m| &m.irreps)).expect("irreps");
    let all = brute_force_coideals(&h, irreps)?;
    let mut t = Table::new(["index", "dim", "mult", "commutative", "label"]);
    for (i, c) in all.iter().enumerate() {
        let label = match &matcher {
            Some(m) => match m.identify(c) {
                MatchResult::Unique(l) => l.to_string(),
                MatchResult::Ambiguous(ls) => format!("ambiguous:{}", join(&ls)),
                MatchResult::Unmatched(why) => format!("unmatched:{}", why),
            },
            None => "-".into(),
        };
        t.push(vec![i.to_string(), c.dim().to_string(), join(&c.mult), c.commutative.to_string(), label]);
    }
    let mut s = t.render(format)?;
    let prefix = if format == Format::Markdown { "\n" } else { "# " };
    let _ = writeln!(s, "{}coideals: {}", prefix, all.len());
    Ok(s)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Build { k, twisted, algebra } => {
            if cli.format != Format::Qgw1 && cli.format != Format::Tsv {
                return Err(Failure::Usage("build emits qgw-1 only".into()));
            }
            let kind = algebra.unwrap_or(if *twisted { AlgebraKind::Twisted } else { AlgebraKind::Function });
            Ok(build_document(*k, kind)?.to_json())
        }
        Command::Verify { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| QgwError::Io(format!("{}: {}", file.display(), e)))?;
            let doc = Document::from_json(&text)?;
            let (report, failed) = verify_document(&doc, cli.precision)?;
            if failed.is_empty() {
                Ok(report)
            } else {
                Err(Failure::Certificate { module: "hopf", witness: failed.join("; "), report })
            }
        }
        Command::Classify { k, twisted } => classify(*k, *twisted, cli.format),
        Command::Count { k } => count(k, cli.format),
        Command::O2 { op } => o2(op, cli.format),
        Command::Oracle { group, algebra } => oracle(group, *algebra, cli.format),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), QgwError> {
    match out {
        None => {
            print!("{}", text);
            Ok(())
        }
        Some(path) => {
            // Write beside the target, then rename, so a partial file never appears.
            let tmp = path.with_extension("partial");
            std::fs::write(&tmp, text).and_then(|_| std::fs::rename(&tmp, path)).map_err(|e| QgwError::Io(format!("{}: {}", path.display(), e)))
        }
    }
}

fn error_record(code: &str, module: &str, witness: String) {
    let rec = ErrorRecord { code, module, witness };
    eprintln!("{}", serde_json::to_string(&rec).expect("error record serializes"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            error_record("Usage", "cli", "--threads must be positive".into());
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool is configured once");
    }
    match run(&cli) {
        Ok(text) => match emit(&cli.out, &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                error_record(e.code(), e.module(), e.to_string());
                ExitCode::from(1)
            }
        },
        Err(Failure::Usage(msg)) => {
            error_record("Usage", "cli", msg);
            ExitCode::from(2)
        }
        Err(Failure::Error(e)) => {
            error_record(e.code(), e.module(), e.to_string());
            ExitCode::from(1)
        }
        Err(Failure::Certificate { module, witness, report }) => {
            print!("{}", report);
            error_record("CertificateFailure", module, witness);
            ExitCode::from(1)
        }
    }
}
