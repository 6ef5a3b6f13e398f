//! Command-line front end: argument parsing, dispatch to the library and
//! deterministic JSON / plain-text reports.
//!
//! Exit codes: `0` success, `1` a failed check or a mathematical error,
//! `2` a usage or input error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Arg, ArgAction, ArgGroup, ArgMatches, Command};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::acceptance::{self, LARGE_CATALOG_BOUND};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::kkring::KKRing;
use crate::laurent::{orbit_sum, LaurentPoly};
use crate::rootdata::{word_name, RootDatum, PRESETS};
use crate::soergelmod::{
    bs_bimodule, bs_module, cartan_of_category, catalog, coinvariant_image, decompose, local_iso, Catalog,
};
use crate::structalg::{gkm_check, psi_basis, psi_expand, steinberg_basis, PsiExpansion, TensorElement, WFunction};
use crate::VERSION;

/// Subcommands and their one-line descriptions.
pub const COMMANDS: [(&str, &str); 11] = [
    ("psi", "the basis psi_w of Fun(W, R) and its certificate"),
    ("tau-check", "congruence check of tau on given or random tensors"),
    ("psi-expand", "expand a function on W in the psi basis"),
    ("steinberg", "Steinberg basis of R over R^W with its determinant certificate"),
    ("braid-check", "y_w agrees across all reduced words of w"),
    ("bs-decompose", "Krull-Schmidt decomposition of a Bott-Samelson module"),
    ("bimodule-check", "R^W acts centrally on B(word); the bimodule specializes to the module"),
    ("coinvariants", "the algebra generated by R acting on B(w_0)"),
    ("catalog", "the indecomposables D_w with their characters"),
    ("cartan-of-category", "dimensions of Hom(B(x), B(y)) over canonical words"),
    ("accept", "run the acceptance suite"),
];

/// Number of random tensors `tau-check` tries when none is given.
pub const DEFAULT_ORDER: usize = 8;
/// Word-length bound for `bimodule-check` without `--word`.
pub const DEFAULT_BIMODULE_LENGTH: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DatumSource {
    Preset(String),
    File(PathBuf),
    /// Built in memory, e.g. through the C interface.
    Inline,
}

/// A parsed invocation with its datum loaded and field resolved.
#[derive(Clone, Debug)]
pub struct Invocation {
    pub name: String,
    /// Absent only for `accept`.
    pub datum: Option<(DatumSource, RootDatum)>,
    /// `--field`, else the datum file's field, else `Q`.
    pub field: FieldSpec,
    pub options: Options,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub word: Option<Vec<usize>>,
    pub seed: u64,
    pub order: Option<usize>,
    pub max_length: Option<usize>,
    pub values: Option<String>,
    pub tensor: Option<String>,
    pub criteria: Vec<u8>,
    pub json: bool,
}

/// What the command line asked for.
#[derive(Clone, Debug)]
pub enum Parsed {
    Run(Box<Invocation>),
    /// Help or version text, and the exit code to leave with.
    Text(String, i32),
}

/// A finished report: the JSON object and whether its checks passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub pass: bool,
}

/// Captured result of a full CLI run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn command() -> Command {
    let preset =
        Arg::new("preset").long("preset").value_name("NAME").help(format!("named root datum: {}", PRESETS.join(", ")));
    let datum = Arg::new("datum").long("datum").value_name("FILE").help("root datum JSON file");
    let field = Arg::new("field").long("field").value_name("Q|Fp:P").help("coefficient field (default Q)");
    let json = Arg::new("json").long("json").action(ArgAction::SetTrue).help("emit JSON");
    let seed = Arg::new("seed")
        .long("seed")
        .value_name("N")
        .value_parser(clap::value_parser!(u64))
        .default_value("0")
        .help("seed for randomized steps");
    let word = Arg::new("word").long("word").value_name("s1,s2,...").help("a word in the simple reflections");
    let max_length = Arg::new("max-length")
        .long("max-length")
        .value_name("N")
        .value_parser(clap::value_parser!(usize))
        .help("word-length bound");
    let tensor = Arg::new("tensor")
        .long("tensor")
        .value_name("a|b;c|d")
        .help("tensor sum_i a_i (x) b_i as `a|b` pairs separated by `;`");

    let with_datum = |c: Command| {
        c.arg(preset.clone())
            .arg(datum.clone())
            .arg(field.clone())
            .arg(json.clone())
            .group(ArgGroup::new("source").args(["preset", "datum"]).required(true))
    };
    let sub = |name: &'static str| {
        let about = COMMANDS.iter().find(|(n, _)| *n == name).map(|(_, a)| *a).unwrap_or_default();
        Command::new(name).about(about)
    };

    Command::new("kksoergel")
        .version(VERSION)
        .about("Exact Kostant-Kumar and Soergel-module computations over Q and prime fields")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(with_datum(sub("psi")))
        .subcommand(
            with_datum(sub("tau-check")).arg(seed.clone()).arg(tensor.clone()).arg(
                Arg::new("order")
                    .long("order")
                    .value_name("N")
                    .value_parser(clap::value_parser!(usize))
                    .help(format!("number of random tensors (default {DEFAULT_ORDER})")),
            ),
        )
        .subcommand(with_datum(sub("psi-expand")).arg(seed.clone()).arg(tensor.conflicts_with("values")).arg(
            Arg::new("values").long("values").value_name("f(e);f(s1);...").help(
                "values of the function in canonical element order, separated by `;` (default: tau of a random tensor)",
            ),
        ))
        .subcommand(with_datum(sub("steinberg")))
        .subcommand(with_datum(sub("braid-check")))
        .subcommand(
            with_datum(sub("bs-decompose"))
                .arg(word.clone().required(true))
                .arg(seed.clone())
                .arg(max_length.clone().help("longest D_w used to label summands (default: the word length)")),
        )
        .subcommand(with_datum(sub("bimodule-check")).arg(word).arg(
            max_length.clone().help(format!("check all words up to this length (default {DEFAULT_BIMODULE_LENGTH})")),
        ))
        .subcommand(with_datum(sub("coinvariants")))
        .subcommand(
            with_datum(sub("catalog")).arg(seed.clone()).arg(
                max_length
                    .clone()
                    .help(format!("longest w to catalog (default: all of W, or {LARGE_CATALOG_BOUND} when |W| > 8)")),
            ),
        )
        .subcommand(
            with_datum(sub("cartan-of-category"))
                .arg(max_length.help(format!(
                    "longest canonical word (default: all of W, or {LARGE_CATALOG_BOUND} when |W| > 8)"
                ))),
        )
        .subcommand(
            sub("accept").arg(seed).arg(json).arg(
                Arg::new("criteria")
                    .long("criteria")
                    .value_name("1,2,...")
                    .value_delimiter(',')
                    .value_parser(clap::value_parser!(u8).range(1..=11))
                    .help("run only these criteria"),
            ),
        )
}

/// Parses `argv` (including the program name) and loads the datum.
pub fn parse_invocation<I, T>(args: I) -> Result<Parsed>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(Parsed::Text(e.render().to_string(), 0)),
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => Ok(Parsed::Text(e.render().to_string(), 2)),
                _ => Err(Error::Usage(one_line(&e.render().to_string()))),
            };
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let datum = load_datum(sub)?;
    let field = match (opt_string(sub, "field"), &datum) {
        (Some(text), _) => FieldSpec::parse(&text)?,
        (None, Some((_, _, Some(f)))) => *f,
        _ => FieldSpec::Q,
    };
    let datum = datum.map(|(src, d, _)| (src, d));
    let word = match (opt_string(sub, "word"), &datum) {
        (Some(text), Some((_, d))) => Some(d.parse_word(&text)?),
        _ => None,
    };
    let options = Options {
        word,
        seed: if has(sub, "seed") { *sub.get_one::<u64>("seed").expect("defaulted") } else { 0 },
        order: has(sub, "order").then(|| sub.get_one::<usize>("order").copied()).flatten(),
        max_length: has(sub, "max-length").then(|| sub.get_one::<usize>("max-length").copied()).flatten(),
        values: opt_string(sub, "values"),
        tensor: opt_string(sub, "tensor"),
        criteria: if has(sub, "criteria") {
            sub.get_many::<u8>("criteria").map(|v| v.copied().collect()).unwrap_or_default()
        } else {
            Vec::new()
        },
        json: sub.get_flag("json"),
    };
    Ok(Parsed::Run(Box::new(Invocation { name: name.to_string(), datum, field, options })))
}

fn has(m: &ArgMatches, id: &str) -> bool {
    m.try_contains_id(id).is_ok()
}

fn opt_string(m: &ArgMatches, id: &str) -> Option<String> {
    m.try_get_one::<String>(id).ok().flatten().cloned()
}

fn one_line(rendered: &str) -> String {
    let first = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
    first.trim().trim_start_matches("error:").trim().to_string()
}

type Loaded = (DatumSource, RootDatum, Option<FieldSpec>);

fn load_datum(m: &ArgMatches) -> Result<Option<Loaded>> {
    if let Some(name) = opt_string(m, "preset") {
        let d = RootDatum::preset(&name)?;
        return Ok(Some((DatumSource::Preset(name), d, None)));
    }
    if let Some(path) = opt_string(m, "datum") {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("reading {path}: {e}")))?;
        let (d, field) = RootDatum::from_json_with_field(&text)?;
        return Ok(Some((DatumSource::File(path.into()), d, field)));
    }
    Ok(None)
}

/// Runs a parsed invocation.
pub fn dispatch(inv: &Invocation) -> Result<Report> {
    let field = inv.field;
    let opts = &inv.options;
    let (mut body, pass) = match (inv.name.as_str(), inv.datum.as_ref().map(|(_, d)| d)) {
        ("accept", _) => accept(opts),
        (_, None) => return Err(Error::Usage("a datum is required (--preset or --datum)".into())),
        ("psi", Some(d)) => psi(d, field)?,
        ("tau-check", Some(d)) => tau_check(d, field, opts)?,
        ("psi-expand", Some(d)) => expand(d, field, opts)?,
        ("steinberg", Some(d)) => steinberg(d, field)?,
        ("braid-check", Some(d)) => braid(d, field),
        ("bs-decompose", Some(d)) => bs_decompose(d, field, opts)?,
        ("bimodule-check", Some(d)) => bimodule(d, field, opts)?,
        ("coinvariants", Some(d)) => coinvariants(d, field)?,
        ("catalog", Some(d)) => catalog_report(d, field, opts)?,
        ("cartan-of-category", Some(d)) => cartan(d, field, opts)?,
        (other, _) => return Err(Error::Usage(format!("unknown command `{other}`"))),
    };
    body.insert("command".into(), json!(inv.name));
    body.insert("version".into(), json!(VERSION));
    if let Some((_, d)) = &inv.datum {
        body.insert("datum".into(), serde_json::to_value(d.fingerprint()).expect("serializable"));
        body.insert("field".into(), json!(field.to_string()));
    }
    Ok(Report { json: Value::Object(body), pass })
}

type Body = (Map<String, Value>, bool);

fn object(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(m) => m,
        _ => unreachable!("reports are objects"),
    }
}

fn psi(d: &RootDatum, field: FieldSpec) -> Result<Body> {
    let basis = psi_basis(d, field)?;
    let cert = basis.certify(d, field)?;
    let table: Vec<Value> =
        basis.iter().map(|(w, f)| json!({"w": d.element_name(w), "values": strings(f.values())})).collect();
    let body = json!({
        "elements": names(d),
        "psi": table,
        "certificate": {
            "support": cert.support,
            "diagonal": cert.diagonal,
            "duality": cert.duality,
            "choice_independent": cert.choice_independent,
        },
        "pass": cert.pass(),
    });
    Ok((object(body), cert.pass()))
}

fn names(d: &RootDatum) -> Vec<String> {
    d.elements().map(|w| d.element_name(w)).collect()
}

fn strings(polys: &[LaurentPoly]) -> Vec<String> {
    polys.iter().map(ToString::to_string).collect()
}

/// Parses `a|b; c|d` into `a (x) b + c (x) d`.
pub fn parse_tensor(d: &RootDatum, field: FieldSpec, text: &str) -> Result<TensorElement> {
    let summands = text
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (a, b) =
                pair.split_once('|').ok_or_else(|| Error::Parse(format!("tensor summand `{pair}` lacks `|`")))?;
            Ok((LaurentPoly::parse(field, d.rank(), a)?, LaurentPoly::parse(field, d.rank(), b)?))
        })
        .collect::<Result<Vec<_>>>()?;
    if summands.is_empty() {
        return Err(Error::Parse("empty tensor".into()));
    }
    Ok(TensorElement { summands })
}

fn tau_check(d: &RootDatum, field: FieldSpec, opts: &Options) -> Result<Body> {
    let tensors = match &opts.tensor {
        Some(text) => vec![parse_tensor(d, field, text)?],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            (0..opts.order.unwrap_or(DEFAULT_ORDER))
                .map(|_| TensorElement::random(field, d.rank(), 2, &mut rng))
                .collect()
        }
    };
    let mut images = Vec::new();
    let mut violations = Vec::new();
    for (k, t) in tensors.iter().enumerate() {
        let f = t.tau(d, field);
        for v in gkm_check(d, &f)?.violations {
            violations.push(json!({
                "tensor": k,
                "w": d.element_name(v.w),
                "coroot": v.coroot,
                "witness": v.witness.to_string(),
            }));
        }
        let summands: Vec<String> = t.summands.iter().map(|(a, b)| format!("{a} | {b}")).collect();
        images.push(json!({"tensor": summands.join("; "), "tau": strings(f.values())}));
    }
    let pass = violations.is_empty();
    let body = json!({
        "elements": names(d),
        "images": images,
        "violations": violations,
        "seed": opts.seed,
        "pass": pass,
    });
    Ok((object(body), pass))
}

fn expand(d: &RootDatum, field: FieldSpec, opts: &Options) -> Result<Body> {
    let f = match (&opts.values, &opts.tensor) {
        (Some(text), _) => {
            let values = text.split(';').map(|v| LaurentPoly::parse(field, d.rank(), v)).collect::<Result<Vec<_>>>()?;
            if values.len() != d.order() {
                return Err(Error::Parse(format!("expected {} values, found {}", d.order(), values.len())));
            }
            WFunction::new(values)
        }
        (None, Some(text)) => parse_tensor(d, field, text)?.tau(d, field),
        (None, None) => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            TensorElement::random(field, d.rank(), 2, &mut rng).tau(d, field)
        }
    };
    let basis = psi_basis(d, field)?;
    let mut body = json!({
        "elements": names(d),
        "function": strings(f.values()),
        "seed": opts.seed,
    });
    let extra = match psi_expand(d, &basis, &f)? {
        PsiExpansion::Coefficients(c) => {
            let coefficients: Vec<Value> =
                c.iter().map(|(w, a)| json!({"w": d.element_name(*w), "coefficient": a.to_string()})).collect();
            json!({"in_image": true, "coefficients": coefficients})
        }
        PsiExpansion::Fail(e) => json!({
            "in_image": false,
            "failure": {"w": d.element_name(e.w), "coroot": e.coroot, "witness": e.witness.to_string()},
        }),
    };
    body.as_object_mut().expect("object").extend(object(extra));
    Ok((object(body), true))
}

fn steinberg(d: &RootDatum, field: FieldSpec) -> Result<Body> {
    let b = steinberg_basis(d, field)?;
    let basis: Vec<Value> = d
        .elements()
        .map(|w| {
            json!({
                "w": d.element_name(w),
                "exponent": b.exponents[w.index()].to_vec(),
                "element": b.element(w).to_string(),
            })
        })
        .collect();
    let c = &b.certificate;
    let body = json!({
        "convention": {"left_descents": b.convention.left_descents, "direct": b.convention.direct},
        "basis": basis,
        "certificate": {
            "holds": c.holds,
            "sign": c.sign,
            "det": c.det().to_string(),
            "rhs": c.rhs.to_string(),
            "grid": c.grid,
            "moduli": c.moduli,
        },
        "pass": c.holds,
    });
    Ok((object(body), c.holds))
}

fn braid(d: &RootDatum, field: FieldSpec) -> Body {
    let kk = KKRing::new(d, field);
    let mut log = Vec::new();
    let mut pairs = 0;
    let mut pass = true;
    for w in d.elements() {
        let words = d.reduced_words(w);
        let first = kk.y_word(&words[0]);
        let agree = words[1..].iter().all(|word| kk.y_word(word) == first);
        pairs += words.len() - 1;
        pass &= agree;
        log.push(json!({"w": d.element_name(w), "reduced_words": words.len(), "agree": agree}));
    }
    (object(json!({"log": log, "pairs": pairs, "pass": pass})), pass)
}

fn letters(word: &[usize]) -> Vec<usize> {
    word.iter().map(|i| i + 1).collect()
}

fn bs_decompose(d: &RootDatum, field: FieldSpec, opts: &Options) -> Result<Body> {
    let word = opts.word.clone().ok_or_else(|| Error::Usage("bs-decompose needs --word".into()))?;
    let m = bs_module(d, &word, field)?;
    let dec = decompose(&m, opts.seed)?;
    let bound = opts.max_length.unwrap_or(word.len());
    let cat = catalog(d, field, Some(bound), opts.seed);
    let mut summands = Vec::new();
    for s in &dec.summands {
        let mut entry = json!({
            "iso_class": "unidentified",
            "dim": s.module.dim(),
            "mult": s.mult,
            "character": Value::Null,
        });
        if let Ok(cat) = &cat {
            for e in &cat.entries {
                if e.module.dim() == s.module.dim() && local_iso(&s.module, &e.module)?.is_some() {
                    entry["iso_class"] = json!(format!("D_{}", d.element_name(e.w)));
                    entry["character"] = json!(e.character.named(d));
                    break;
                }
            }
        }
        summands.push(entry);
    }
    let mut body = object(json!({
        "word": letters(&word),
        "word_name": word_name(&word),
        "dim": m.dim(),
        "summands": summands,
        "seed": opts.seed,
    }));
    if let Err(e) = cat {
        body.insert("catalog_error".into(), error_value(&e)["error"].clone());
    }
    Ok((body, true))
}

fn bimodule(d: &RootDatum, field: FieldSpec, opts: &Options) -> Result<Body> {
    let words = match &opts.word {
        Some(w) => vec![w.clone()],
        None => words_up_to(d.rank(), opts.max_length.unwrap_or(DEFAULT_BIMODULE_LENGTH)),
    };
    let invariants: Vec<LaurentPoly> = (0..d.rank()).map(|i| orbit_sum(d, &d.fundamental_coweight(i), field)).collect();
    let mut log = Vec::new();
    let mut pass = true;
    for word in &words {
        let bm = bs_bimodule(d, word, field)?;
        let mut central = true;
        for f in &invariants {
            central &= bm.acts_centrally(d, f)?;
        }
        let specializes = bm.specialize() == bs_module(d, word, field)?;
        pass &= central && specializes;
        log.push(json!({"word": letters(word), "central": central, "specialization": specializes}));
    }
    Ok((object(json!({"words": log, "pass": pass})), pass))
}

fn words_up_to(rank: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..rank).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn coinvariants(d: &RootDatum, field: FieldSpec) -> Result<Body> {
    let a = coinvariant_image(d, field)?;
    let pass = a.dim == d.order() && a.is_commutative && a.is_local;
    let body = json!({
        "dim": a.dim,
        "expected": d.order(),
        "commutative": a.is_commutative,
        "local": a.is_local,
        "pass": pass,
    });
    Ok((object(body), pass))
}

fn default_bound(d: &RootDatum, requested: Option<usize>) -> Option<usize> {
    requested.or((d.order() > 8).then_some(LARGE_CATALOG_BOUND))
}

fn catalog_report(d: &RootDatum, field: FieldSpec, opts: &Options) -> Result<Body> {
    let cat: Catalog = catalog(d, field, default_bound(d, opts.max_length), opts.seed)?;
    let entries: Vec<Value> = cat
        .entries
        .iter()
        .map(|e| {
            let decomposition: Vec<Value> = e
                .decomposition
                .iter()
                .map(|(label, dim, mult)| json!({"iso_class": label.name(d), "dim": dim, "mult": mult}))
                .collect();
            json!({
                "w": format!("D_{}", d.element_name(e.w)),
                "word": letters(&e.word),
                "dim": e.module.dim(),
                "character": e.character.named(d),
                "decomposition": decomposition,
            })
        })
        .collect();
    let body = json!({"entries": entries, "length_bound": cat.length_bound, "seed": opts.seed});
    Ok((object(body), true))
}

fn cartan(d: &RootDatum, field: FieldSpec, opts: &Options) -> Result<Body> {
    let bound = default_bound(d, opts.max_length);
    let (elements, matrix) = cartan_of_category(d, field, bound)?;
    let body = json!({
        "elements": elements.iter().map(|&w| d.element_name(w)).collect::<Vec<_>>(),
        "matrix": matrix,
        "length_bound": bound.filter(|&b| b < d.length(d.longest())),
    });
    Ok((object(body), true))
}

fn accept(opts: &Options) -> Body {
    let outcomes = if opts.criteria.is_empty() {
        acceptance::run_all(opts.seed)
    } else {
        opts.criteria.iter().map(|&id| acceptance::run(id, opts.seed)).collect()
    };
    let pass = outcomes.iter().all(|o| o.pass);
    let criteria: Vec<Value> =
        outcomes.iter().map(|o| json!({"id": o.id, "title": o.title, "pass": o.pass, "detail": o.detail})).collect();
    let body = json!({"criteria": criteria, "presets": PRESETS, "seed": opts.seed, "pass": pass});
    (object(body), pass)
}

/// `{"error": {"kind": ..., "detail": ...}}`.
pub fn error_value(e: &Error) -> Value {
    json!({"error": {"kind": e.kind(), "detail": e.to_string()}})
}

/// Renders a report as aligned plain text: scalars as `key: value`,
/// arrays of objects as tables, everything else as compact JSON.
pub fn render_text(value: &Value) -> String {
    let mut out = String::new();
    let Value::Object(map) = value else {
        return format!("{}\n", compact(value));
    };
    for (key, v) in map {
        match v {
            Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_object) => {
                out.push_str(&format!("{key}:\n"));
                out.push_str(&table(rows));
            }
            Value::Object(inner) => {
                out.push_str(&format!("{key}:\n"));
                for (k, x) in inner {
                    out.push_str(&format!("  {k}: {}\n", compact(x)));
                }
            }
            _ => out.push_str(&format!("{key}: {}\n", compact(v))),
        }
    }
    out
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            items.iter().map(compact).collect::<Vec<_>>().join(", ")
        }
        other => other.to_string(),
    }
}

fn table(rows: &[Value]) -> String {
    let mut columns: Vec<&String> = Vec::new();
    for row in rows {
        for k in row.as_object().expect("object rows").keys() {
            if !columns.contains(&k) {
                columns.push(k);
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| columns.iter().map(|c| row.get(c.as_str()).map(compact).unwrap_or_default()).collect())
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(j, c)| cells.iter().map(|r| r[j].chars().count()).chain([c.len()]).max().unwrap_or(0))
        .collect();
    let line = |items: Vec<String>| {
        let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        format!("  {}\n", padded.join("  ").trim_end())
    };
    let mut out = line(columns.iter().map(|c| c.to_string()).collect());
    for r in cells {
        out.push_str(&line(r));
    }
    out
}

/// Parses, dispatches and renders; the binary prints the result.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let wants_json = args.iter().any(|a| a == "--json");
    let fail = |e: Error, code: i32| {
        if wants_json {
            Output { code, stdout: format!("{}\n", error_value(&e)), stderr: String::new() }
        } else {
            Output { code, stdout: String::new(), stderr: format!("error: {}: {e}\n", e.kind()) }
        }
    };
    let inv = match parse_invocation(args.clone()) {
        Ok(Parsed::Run(inv)) => *inv,
        Ok(Parsed::Text(text, code)) => return Output { code, stdout: text, stderr: String::new() },
        Err(e) => return fail(e, 2),
    };
    match dispatch(&inv) {
        Ok(report) => {
            let stdout = if inv.options.json {
                format!("{}\n", serde_json::to_string_pretty(&report.json).expect("serializable"))
            } else {
                render_text(&report.json)
            };
            Output { code: if report.pass { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(e @ (Error::Usage(_) | Error::Parse(_))) => fail(e, 2),
        Err(e) => fail(e, 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Parsed> {
        parse_invocation(std::iter::once("kksoergel").chain(args.iter().copied()))
    }

    fn invocation(args: &[&str]) -> Invocation {
        match parse(args).unwrap() {
            Parsed::Run(inv) => *inv,
            Parsed::Text(t, _) => panic!("unexpected text {t}"),
        }
    }

    #[test]
    fn parses_presets_fields_and_words() {
        let inv = invocation(&["coinvariants", "--preset", "A2", "--field", "Fp:3"]);
        assert_eq!(inv.name, "coinvariants");
        assert_eq!(inv.field, FieldSpec::Prime { p: 3 });
        assert_eq!(inv.datum.as_ref().unwrap().0, DatumSource::Preset("A2".into()));

        let inv = invocation(&["bs-decompose", "--preset", "A1", "--word", "1", "--field", "Q"]);
        assert_eq!(inv.options.word, Some(vec![0]));
        assert_eq!(inv.options.seed, 0);

        let inv = invocation(&["bs-decompose", "--preset", "A2", "--word", "s1,s2,s1", "--seed", "7"]);
        assert_eq!(inv.options.word, Some(vec![0, 1, 0]));
        assert_eq!(inv.options.seed, 7);
        assert_eq!(inv.field, FieldSpec::Q);
    }

    #[test]
    fn usage_errors() {
        let usage = |args: &[&str]| matches!(parse(args), Err(Error::Usage(_)));
        assert!(usage(&["psi"]));
        assert!(usage(&["psi", "--preset", "A1", "--datum", "x.json"]));
        assert!(usage(&["psi", "--preset", "A1", "--bogus"]));
        assert!(usage(&["psi", "--preset", "A1", "--word", "1"]));
        assert!(usage(&["frobnicate", "--preset", "A1"]));
        assert!(usage(&["bs-decompose", "--preset", "A1"]));
        assert!(usage(&["catalog", "--preset", "A1", "--seed", "x"]));
        assert!(matches!(parse(&["psi", "--preset", "A1", "--field", "Fp:4"]), Err(Error::NotPrime(4))));
        assert!(matches!(parse(&["psi", "--preset", "E8"]), Err(Error::Parse(_))));
        assert!(matches!(parse(&["bs-decompose", "--preset", "A1", "--word", "2"]), Err(Error::Parse(_))));
        assert!(matches!(parse(&[]), Ok(Parsed::Text(_, 2))));
        assert!(matches!(parse(&["--help"]), Ok(Parsed::Text(_, 0))));
    }

    #[test]
    fn one_line_reasons() {
        let Err(Error::Usage(reason)) = parse(&["psi", "--preset", "A1", "--bogus"]) else { panic!() };
        assert!(!reason.contains('\n'));
        assert!(reason.contains("--bogus"), "{reason}");
    }

    #[test]
    fn tensors_parse() {
        let d = RootDatum::preset("A1").unwrap();
        let t = parse_tensor(&d, FieldSpec::Q, "y1 | y1^-1; 2 | 1").unwrap();
        assert_eq!(t.summands.len(), 2);
        assert!(parse_tensor(&d, FieldSpec::Q, "y1").is_err());
        assert!(parse_tensor(&d, FieldSpec::Q, " ; ").is_err());
    }

    #[test]
    fn text_rendering_is_tabular() {
        let v = json!({"a": 1, "rows": [{"x": "long value", "y": 2}, {"x": "s", "y": 30}], "o": {"k": [1, 2]}});
        let text = render_text(&v);
        assert_eq!(text, "a: 1\no:\n  k: 1, 2\nrows:\n  x           y\n  long value  2\n  s           30\n");
    }

    #[test]
    fn words_enumerate() {
        assert_eq!(words_up_to(2, 2).len(), 7);
    }
}
