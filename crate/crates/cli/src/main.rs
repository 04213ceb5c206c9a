//! `maxcode`: command-line front end.
//!
//! Exit codes: 0 when every checked property holds, 1 when one fails, 2 on
//! usage or parse errors.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use maxcode::arrangement::{
    build_arrangement, companion_among, companion_for, triangle_audit, verify_arrangement, ArrangementError,
    CompanionCert,
};
use maxcode::code::{is_code, is_maximal_finite_code, is_prefix_code, order_of_letter, CodeError};
use maxcode::corpus::CorpusEntry;
use maxcode::good::{decide_inclusion, GoodError};
use maxcode::pipeline::{run_pipeline, ArrangementEntry, DEFAULT_MIDDLES};
use maxcode::poly::ExpSet;
use maxcode::word::{FiniteLanguage, Word};
use maxcode::xw::{enumerate_middles, XwError, XwExtractor, XwSet};
use maxcode::zn::{
    enumerate_factorizations, enumerate_krasner, is_hajos, is_krasner, is_periodic_set, HajosWitness, KrasnerPair,
    ZnError, DEFAULT_BOUND,
};

#[derive(Parser)]
#[command(name = "maxcode", version, about = "Finite maximal codes around a distinguished letter")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Language JSON file, or `-` for stdin.
    file: String,
    /// Distinguished letter.
    #[arg(long)]
    letter: Option<char>,
}

#[derive(Args)]
struct MiddleArgs {
    /// Middles to use, in power notation; defaults to all enumerated middles.
    #[arg(long = "w")]
    w: Vec<String>,
    /// Cap on letters other than the distinguished one in enumerated middles.
    #[arg(long, default_value_t = DEFAULT_MIDDLES)]
    middles: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Codehood, prefix property, maximality and the order of the letter.
    CheckCode {
        #[command(flatten)]
        input: Input,
        /// Only require codehood, not maximality.
        #[arg(long)]
        code_only: bool,
    },
    /// Extraction, companion search, arrangements, triangle audit and the small-omega checks.
    Pipeline {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_MIDDLES)]
        middles: usize,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// Factorizations of Z/nZ with periodicity, exact-sum and Hajós flags.
    EnumFactorizations {
        n: usize,
        /// List exact-sum pairs over divisor chains instead.
        #[arg(long)]
        krasner: bool,
        /// Attach a Hajós witness to every factorization.
        #[arg(long)]
        hajos_check: bool,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// The set X_w for one middle w.
    ExtractXw {
        #[command(flatten)]
        input: Input,
        /// Middle in power notation, e.g. `bab` or `ba^2b`.
        #[arg(long = "w")]
        w: String,
    },
    /// Builds and verifies arrangements over a companion factorization.
    Arrange {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        mids: MiddleArgs,
        /// Companion T (comma-separated); searched when omitted.
        #[arg(long = "t", value_parser = parse_set, requires = "r")]
        t: Option<ExpSet>,
        /// Companion R (comma-separated).
        #[arg(long = "r", value_parser = parse_set, requires = "t")]
        r: Option<ExpSet>,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// Per-k counts of #{(r, v) in X_w : r + v <= k} against k + 1.
    TriangleAudit {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        mids: MiddleArgs,
    },
    /// Whether Y ∪ {a^n} embeds in a finite maximal code, for n with at most two prime factors.
    DecideInclusion {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        n: usize,
    },
}

fn parse_set(s: &str) -> Result<ExpSet, String> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(ExpSet::new)
}

/// A failed run: exit status and message.
struct Failure(u8, String);

impl Failure {
    fn usage(msg: impl ToString) -> Self {
        Failure(2, msg.to_string())
    }
}

fn code_status(e: &CodeError) -> u8 {
    match e {
        CodeError::NotACode(_) | CodeError::MultiplePowers(..) | CodeError::BoundViolated { .. } => 1,
        _ => 2,
    }
}

fn xw_status(e: &XwError) -> u8 {
    match e {
        XwError::NoPowerOfA(_) => 1,
        XwError::WNotBayonetShape(_) => 2,
        XwError::Code(c) => code_status(c),
    }
}

impl From<XwError> for Failure {
    fn from(e: XwError) -> Self {
        Failure(xw_status(&e), e.to_string())
    }
}

impl From<CodeError> for Failure {
    fn from(e: CodeError) -> Self {
        Failure(code_status(&e), e.to_string())
    }
}

impl From<ZnError> for Failure {
    fn from(e: ZnError) -> Self {
        let status = match e {
            ZnError::BoundExceeded { .. } | ZnError::ZeroModulus | ZnError::InvalidChain(_) => 2,
            _ => 1,
        };
        Failure(status, e.to_string())
    }
}

impl From<ArrangementError> for Failure {
    fn from(e: ArrangementError) -> Self {
        let status = match &e {
            ArrangementError::Xw(x) => xw_status(x),
            ArrangementError::Code(c) => code_status(c),
            ArrangementError::BadGrid(_) => 2,
            _ => 1,
        };
        Failure(status, e.to_string())
    }
}

impl From<GoodError> for Failure {
    fn from(e: GoodError) -> Self {
        let status = match &e {
            GoodError::PreconditionFailed(_) | GoodError::OmegaTooLarge { .. } | GoodError::CardMismatch { .. } => 2,
            GoodError::Xw(x) => xw_status(x),
            GoodError::Code(c) => code_status(c),
            GoodError::Arrangement(a) => Failure::from(a.clone()).0,
            _ => 1,
        };
        Failure(status, e.to_string())
    }
}

struct Loaded {
    language: FiniteLanguage,
    letter: u8,
    /// Set when the input was a corpus entry given by a verified factorization.
    factorized: bool,
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::usage(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))?;
    }
    Ok(text)
}

/// Accepts a language `{"alphabet": [...], "words": [...]}` or a corpus entry.
fn load(input: &Input) -> Result<Loaded, Failure> {
    let text = read_input(&input.file)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("parse error: {e}")))?;
    let (language, letter, factorized) = if value.get("letter").is_some() {
        let entry = CorpusEntry::from_json(&text).map_err(|e| Failure::usage(format!("parse error: {e}")))?;
        let factorized = entry.factorization.is_some();
        (entry.language(), entry.letter, factorized)
    } else {
        let language: FiniteLanguage =
            serde_json::from_value(value).map_err(|e| Failure::usage(format!("parse error: {e}")))?;
        (language, b'a', false)
    };
    let letter = match input.letter {
        Some(c) if c.is_ascii() => c as u8,
        Some(c) => return Err(Failure::usage(format!("letter {c:?} is not ASCII"))),
        None => letter,
    };
    Ok(Loaded {
        language,
        letter,
        factorized,
    })
}

fn parse_word(s: &str) -> Result<Word, Failure> {
    Word::parse_powers(s).map_err(|e| Failure::usage(format!("bad word {s:?}: {e}")))
}

fn middles(loaded: &Loaded, mids: &MiddleArgs) -> Result<Vec<Word>, Failure> {
    if mids.w.is_empty() {
        Ok(enumerate_middles(&loaded.language, loaded.letter, mids.middles))
    } else {
        mids.w.iter().map(|s| parse_word(s)).collect()
    }
}

fn emit<T: Serialize>(value: &T) -> Result<(), Failure> {
    let s = serde_json::to_string(value).map_err(|e| Failure(2, e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn status(ok: bool) -> u8 {
    u8::from(!ok)
}

#[derive(Serialize)]
struct CheckReport {
    code: bool,
    prefix: bool,
    maximal: Option<bool>,
    letter: String,
    order: Option<usize>,
    witness: Option<maxcode::code::DoubleFactorization>,
}

fn check_code(json: bool, input: &Input, code_only: bool) -> Result<u8, Failure> {
    let loaded = load(input)?;
    let x = &loaded.language;
    let report = is_code(x)?;
    let prefix = is_prefix_code(x)?;
    let maximal = if report.is_code {
        match is_maximal_finite_code(x) {
            Ok(m) => Some(m),
            Err(CodeError::UnaryAlphabet) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let order = order_of_letter(x, loaded.letter)?;
    let out = CheckReport {
        code: report.is_code,
        prefix,
        maximal,
        letter: (loaded.letter as char).to_string(),
        order,
        witness: report.counterexample,
    };
    if json {
        emit(&out)?;
    } else {
        let order_text = order.map_or("none".to_string(), |n| n.to_string());
        println!(
            "code: {}, maximal: {}, order({})={}",
            yes(out.code),
            out.maximal.map_or("n/a", yes),
            out.letter,
            order_text
        );
        println!("prefix: {}", yes(prefix));
        if let Some(w) = &out.witness {
            println!("witness: {w}");
        }
    }
    Ok(status(out.code && (code_only || out.maximal == Some(true))))
}

fn pipeline(json: bool, input: &Input, middles: usize, bound: usize) -> Result<u8, Failure> {
    let loaded = load(input)?;
    let report = run_pipeline(&loaded.language, loaded.letter, middles, bound)?;
    if json {
        emit(&report)?;
    } else {
        println!(
            "code: {}, maximal: {}, order({})={}",
            yes(report.code.is_code),
            yes(report.maximal),
            report.letter,
            report.n
        );
        if loaded.factorized {
            println!("positive factorization: verified");
        }
        let card_ok = report.xw_reports.iter().filter(|r| r.passes()).count();
        println!("middles: {} ({card_ok} with Card = n, injective residues, code with a^n)", report.middles.len());
        match &report.companion {
            Some(c) => println!("companion: T={:?} R={:?}", c.t.as_slice(), c.r.as_slice()),
            None => println!("companion: none"),
        }
        let arr_ok = report.arrangements.iter().filter(|e| e.report.passes).count();
        println!("arrangements: {arr_ok}/{} verified", report.arrangements.len());
        if let Some(c) = &report.cross_check {
            println!("cross-check: {} ({} pairs)", if c.passes { "pass" } else { "FAIL" }, c.pairs_checked);
        }
        let tri_ok = report.triangle.iter().filter(|t| t.passes).count();
        println!("triangle: {tri_ok}/{} pass", report.triangle.len());
        if let Some(s) = &report.small_omega {
            match &s.krasner {
                Some(k) => println!("Krasner companion: I={:?} J={:?}", k.i.as_slice(), k.j.as_slice()),
                None => println!("Krasner companion: none"),
            }
            println!("companion/good-arrangement equivalence: {}", yes(s.equivalence.holds));
        }
        println!("result: {}", if report.passes { "PASS" } else { "FAIL" });
    }
    Ok(status(report.passes))
}

#[derive(Serialize)]
struct FactorizationRow {
    #[serde(flatten)]
    pair: maxcode::zn::ZnFactorization,
    periodic_r: Option<usize>,
    periodic_t: Option<usize>,
    krasner: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    hajos: Option<Option<HajosWitness>>,
}

fn enum_factorizations(json: bool, n: usize, krasner: bool, hajos_check: bool, bound: usize) -> Result<u8, Failure> {
    if n == 0 {
        return Err(ZnError::ZeroModulus.into());
    }
    if krasner {
        if n > bound {
            return Err(ZnError::BoundExceeded { n, bound }.into());
        }
        let pairs: Vec<KrasnerPair> = enumerate_krasner(n);
        if json {
            emit(&pairs)?;
        } else {
            for kp in &pairs {
                println!("chain {:?}: I={:?} J={:?}", kp.chain.as_slice(), kp.i.as_slice(), kp.j.as_slice());
            }
            let chains = if n == 1 { pairs.len() } else { pairs.len() / 2 };
            println!("{chains} chains, {} pairs", pairs.len());
        }
        return Ok(0);
    }
    let mut all_hajos = true;
    let rows: Vec<FactorizationRow> = enumerate_factorizations(n, bound)?
        .into_iter()
        .map(|f| {
            let hajos = if hajos_check {
                let w = is_hajos(&f.r, &f.t, n)?;
                all_hajos &= w.is_some();
                Some(w)
            } else {
                None
            };
            Ok(FactorizationRow {
                periodic_r: is_periodic_set(&f.r, n),
                periodic_t: is_periodic_set(&f.t, n),
                krasner: is_krasner(&f.r, &f.t, n),
                hajos,
                pair: f,
            })
        })
        .collect::<Result<_, ZnError>>()?;
    if json {
        emit(&rows)?;
    } else {
        for row in &rows {
            let mut flags = Vec::new();
            if let Some(p) = row.periodic_r {
                flags.push(format!("R periodic {p}"));
            }
            if let Some(p) = row.periodic_t {
                flags.push(format!("T periodic {p}"));
            }
            if row.krasner {
                flags.push("exact sums".to_string());
            }
            match &row.hajos {
                Some(Some(w)) => flags.push(format!("Hajós via chain {:?}", w.base.chain.as_slice())),
                Some(None) => flags.push("not Hajós".to_string()),
                None => {}
            }
            println!("R={:?} T={:?} {}", row.pair.r.as_slice(), row.pair.t.as_slice(), flags.join(", "));
        }
        println!("{} factorizations", rows.len());
    }
    Ok(status(all_hajos))
}

fn extract_xw(json: bool, input: &Input, w: &str) -> Result<u8, Failure> {
    let loaded = load(input)?;
    let w = parse_word(w)?;
    let ext = XwExtractor::new(&loaded.language, loaded.letter)?;
    let xw: XwSet = ext.xw(&w)?;
    if json {
        emit(&xw)?;
    } else {
        let words: Vec<String> = xw.words(loaded.letter).iter().map(Word::to_power_notation).collect();
        println!("X_{} ({} words, n = {}): {}", w.to_power_notation(), xw.len(), xw.n, words.join(" "));
    }
    Ok(status(xw.len() == xw.n && xw.residues_injective()))
}

#[derive(Serialize)]
struct ArrangeOutput {
    companion: CompanionCert,
    arrangements: Vec<ArrangementEntry>,
    passes: bool,
}

fn arrange(
    json: bool,
    input: &Input,
    mids: &MiddleArgs,
    given: Option<(ExpSet, ExpSet)>,
    bound: usize,
) -> Result<u8, Failure> {
    let loaded = load(input)?;
    let ext = XwExtractor::new(&loaded.language, loaded.letter)?;
    let ws = middles(&loaded, mids)?;
    let xws = ws.iter().map(|m| ext.xw(m)).collect::<Result<Vec<_>, _>>()?;
    let companion = match given {
        Some((t, r)) => companion_for(&xws, &t, &r).map_err(|e| Failure(1, format!("not a companion: {e}")))?,
        None => companion_among(&xws, ext.n(), bound)?.ok_or_else(|| Failure(1, "no companion factorization".into()))?,
    };
    let mut arrangements = Vec::new();
    for xw in &xws {
        let arrangement = build_arrangement(xw, &companion.t, &companion.r)?;
        let report = verify_arrangement(&arrangement, &companion.t, &companion.r);
        arrangements.push(ArrangementEntry { arrangement, report });
    }
    let passes = arrangements.iter().all(|e| e.report.passes);
    if json {
        emit(&ArrangeOutput {
            companion,
            arrangements,
            passes,
        })?;
    } else {
        println!("companion: T={:?} R={:?}", companion.t.as_slice(), companion.r.as_slice());
        for e in &arrangements {
            println!("w = {}: {}", e.arrangement.w.to_power_notation(), if e.report.passes { "verified" } else { "FAIL" });
            for row in e.arrangement.words(loaded.letter) {
                let cells: Vec<String> = row.iter().map(Word::to_power_notation).collect();
                println!("  {}", cells.join("  "));
            }
        }
    }
    Ok(status(passes))
}

fn triangle(json: bool, input: &Input, mids: &MiddleArgs) -> Result<u8, Failure> {
    let loaded = load(input)?;
    let ext = XwExtractor::new(&loaded.language, loaded.letter)?;
    let reports = middles(&loaded, mids)?
        .iter()
        .map(|m| ext.xw(m).map(|xw| triangle_audit(&xw)))
        .collect::<Result<Vec<_>, _>>()?;
    let passes = reports.iter().all(|r| r.passes);
    if json {
        emit(&reports)?;
    } else {
        for r in &reports {
            let counts: Vec<String> = r.counts.iter().map(|(k, c)| format!("{k}:{c}")).collect();
            let verdict = match r.first_violation {
                None => "pass".to_string(),
                Some(k) => format!("FAIL at k={k}"),
            };
            println!("w = {}: {verdict} [{}]", r.w.to_power_notation(), counts.join(" "));
        }
    }
    Ok(status(passes))
}

fn inclusion(json: bool, input: &Input, n: usize) -> Result<u8, Failure> {
    let loaded = load(input)?;
    let decision = decide_inclusion(&loaded.language, loaded.letter, n)?;
    if json {
        emit(&decision)?;
    } else {
        println!("decision: {}", decision.decision);
        if let Some(k) = &decision.krasner {
            println!("Krasner pair: I={:?} J={:?}", k.i.as_slice(), k.j.as_slice());
        }
        for c in &decision.certs {
            println!("letter {}:", c.letter);
            for row in c.cert.grid.words(loaded.letter) {
                let cells: Vec<String> = row.iter().map(Word::to_power_notation).collect();
                println!("  {}", cells.join("  "));
            }
        }
        for f in &decision.failures {
            println!("I={:?} J={:?} letter {}: {}", f.i.as_slice(), f.j.as_slice(), f.letter, f.reason);
        }
    }
    Ok(status(decision.is_yes()))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let json = cli.json;
    match cli.command {
        Command::CheckCode { input, code_only } => check_code(json, &input, code_only),
        Command::Pipeline { input, middles, bound } => pipeline(json, &input, middles, bound),
        Command::EnumFactorizations {
            n,
            krasner,
            hajos_check,
            bound,
        } => enum_factorizations(json, n, krasner, hajos_check, bound),
        Command::ExtractXw { input, w } => extract_xw(json, &input, &w),
        Command::Arrange {
            input,
            mids,
            t,
            r,
            bound,
        } => arrange(json, &input, &mids, t.zip(r), bound),
        Command::TriangleAudit { input, mids } => triangle(json, &input, &mids),
        Command::DecideInclusion { input, n } => inclusion(json, &input, n),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
