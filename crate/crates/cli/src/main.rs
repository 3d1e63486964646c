use std::collections::BTreeSet;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tts_core::axioms::{self, check_complements, construct_eta, is_supportive, DatumJson, SupportDatum};
use tts_core::frames::{self, FiniteFrame};
use tts_core::homalg::{cohomology_all, is_acyclic, BaseRing, ChainComplex, Prime, RingJson};
use tts_core::poset::{FinitePoset, PosetJson};
use tts_core::spectral::SpectralSpace;
use tts_core::suite::{self, SuiteConfig};
use tts_core::support::{self, SupportDescriptor};
use tts_core::Error;

#[derive(Parser)]
#[command(name = "tts", version, about = "Supports, spectral spaces and frames at desk scale")]
struct Cli {
    /// Output format; `suite` defaults to tsv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, default_value_t = suite::DEFAULT_SEED)]
    seed: u64,
    /// Largest poset accepted as input (and enumerated by `suite`).
    #[arg(long, global = true, default_value_t = suite::DEFAULT_MAX_POSET)]
    max_poset: usize,
    /// Largest frame whose assembly is enumerated.
    #[arg(long, global = true, default_value_t = frames::DEFAULT_MAX_FRAME)]
    max_frame: usize,
    /// Random instances per ring class (`suite`) or sampled covers per open (`axioms`).
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Finite spectral spaces given as posets.
    Spectral {
        #[arg(value_enum)]
        op: SpectralOp,
        /// Poset JSON file, or inline JSON.
        input: String,
        /// Point for `z-set`.
        #[arg(long)]
        point: Option<String>,
        /// Comma-separated closed set for `weakly-isolated`.
        #[arg(long)]
        closed: Option<String>,
    },
    /// Frames of opens, nuclei and the assembly.
    Frames {
        #[arg(value_enum)]
        op: FramesOp,
        /// Poset JSON file, or inline JSON.
        input: String,
        /// Read the poset as a finite lattice instead of a space.
        #[arg(long)]
        lattice: bool,
        /// Frame element for `essential`; defaults to the bottom.
        #[arg(long)]
        element: Option<String>,
    },
    /// Supports of complexes.
    Support {
        #[arg(value_enum)]
        op: SupportOp,
        /// Complex JSON file, or inline JSON.
        input: String,
        /// Comma-separated primes to invert for `localize`.
        #[arg(long)]
        invert: Option<String>,
    },
    /// Support data and the factorisation through the localising topology.
    Axioms {
        #[arg(value_enum)]
        op: AxiomsOp,
        /// Datum JSON (poset JSON for `thomason`, ring JSON for `ring`).
        input: String,
    },
    /// The seeded acceptance battery.
    Suite,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectralOp {
    Summary,
    Cbrank,
    Thomason,
    #[value(alias = "zset")]
    ZSet,
    Dual,
    Skula,
    Visible,
    WeaklyIsolated,
    Scattered,
}

#[derive(Clone, Copy, ValueEnum)]
enum FramesOp {
    #[value(alias = "of")]
    Opens,
    Boolean,
    Essential,
    Skula,
    Primes,
    Spc,
    Assembly,
    Sigma,
    Conditions,
}

#[derive(Clone, Copy, ValueEnum)]
enum SupportOp {
    Small,
    Big,
    Foxby,
    Ass,
    Vanish,
    Cohomology,
    Localize,
    Suite,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxiomsOp {
    Check,
    Eta,
    Supportive,
    Thomason,
    Ring,
}

/// A failure mapped to an exit status.
struct Failure {
    code: u8,
    body: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Bound {
                bound,
                limit,
                required,
            } => Failure {
                code: 2,
                body: json!({"error": format!("bound `{bound}` exceeded"), "bound": bound, "limit": limit, "required": required}),
            },
            other => Failure {
                code: 1,
                body: json!({"error": other.to_string()}),
            },
        }
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        body: json!({"error": msg.into()}),
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(&cli) {
        Ok(Report::Value(v)) => {
            print!("{}", render(&v, format.unwrap_or(Format::Json)));
            ExitCode::SUCCESS
        }
        Ok(Report::Text(text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(f) => {
            println!("{}", f.body);
            ExitCode::from(f.code)
        }
    }
}

enum Report {
    Value(Value),
    /// Pre-rendered output and whether every check passed.
    Text(String, bool),
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(v).expect("serialisable")),
        Format::Tsv => {
            let mut out = String::new();
            match v {
                Value::Object(o) => {
                    for (k, x) in o {
                        let cell = match x {
                            Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        out.push_str(&format!("{k}\t{cell}\n"));
                    }
                }
                Value::Array(rows) => {
                    for r in rows {
                        out.push_str(&format!("{r}\n"));
                    }
                }
                other => out.push_str(&format!("{other}\n")),
            }
            out
        }
    }
}

fn read_json(input: &str) -> Outcome<Value> {
    let text = if input.trim_start().starts_with(['{', '[']) {
        input.to_string()
    } else {
        std::fs::read_to_string(Path::new(input)).map_err(|e| input_error(format!("cannot read `{input}`: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| input_error(format!("malformed JSON at line {}, column {}: {e}", e.line(), e.column())))
}

fn parse<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Outcome<T> {
    serde_json::from_value(v).map_err(|e| input_error(format!("bad {what}: {e}")))
}

fn read_space(cli: &Cli, input: &str) -> Outcome<SpectralSpace> {
    let p = FinitePoset::from_json(&parse::<PosetJson>(read_json(input)?, "poset")?)?;
    if p.len() > cli.max_poset {
        return Err(Error::Bound {
            bound: "max-poset",
            limit: cli.max_poset,
            required: p.len(),
        }
        .into());
    }
    Ok(SpectralSpace::new(p))
}

fn read_complex(input: &str) -> Outcome<ChainComplex> {
    Ok(ChainComplex::from_json(&read_json(input)?)?)
}

fn run(cli: &Cli) -> Outcome<Report> {
    match &cli.command {
        Command::Spectral {
            op,
            input,
            point,
            closed,
        } => spectral(cli, *op, input, point.as_deref(), closed.as_deref()).map(Report::Value),
        Command::Frames {
            op,
            input,
            lattice,
            element,
        } => frames_cmd(cli, *op, input, *lattice, element.as_deref()).map(Report::Value),
        Command::Support { op, input, invert } => support_cmd(*op, input, invert.as_deref()),
        Command::Axioms { op, input } => axioms_cmd(cli, *op, input).map(Report::Value),
        Command::Suite => {
            let cfg = SuiteConfig {
                seed: cli.seed,
                samples: cli.samples.unwrap_or(suite::DEFAULT_SAMPLES),
                max_poset: cli.max_poset,
                max_frame: cli.max_frame,
                ..SuiteConfig::default()
            };
            let results = suite::run_suite(&cfg);
            let ok = results.iter().all(|r| r.pass);
            let text = match cli.format.unwrap_or(Format::Tsv) {
                Format::Tsv => suite::render_tsv(&cfg, &results),
                Format::Json => format!("{}\n", suite::render_json(&cfg, &results)),
            };
            Ok(Report::Text(text, ok))
        }
    }
}

fn spectral(cli: &Cli, op: SpectralOp, input: &str, point: Option<&str>, closed: Option<&str>) -> Outcome<Value> {
    let x = read_space(cli, input)?;
    let names = |m| x.names(m);
    Ok(match op {
        SpectralOp::Summary => json!({
            "points": x.order().elements(),
            "opens": x.opens().into_iter().map(names).collect::<Vec<_>>(),
            "closeds": x.closeds().into_iter().map(names).collect::<Vec<_>>(),
            "thomason": x.thomason_sets().into_iter().map(|t| names(t.members())).collect::<Vec<_>>(),
            "visible": names(x.visible_points()),
            "cb_rank": x.cb_rank(),
        }),
        SpectralOp::Cbrank => json!({ "rank": x.cb_rank() }),
        SpectralOp::Thomason => json!(x.thomason_sets().into_iter().map(|t| names(t.members())).collect::<Vec<_>>()),
        SpectralOp::ZSet => {
            let p = point.ok_or_else(|| input_error("`z-set` needs --point"))?;
            json!({ "point": p, "z": names(x.z_set(p)?.members()) })
        }
        SpectralOp::Dual => serde_json::to_value(x.hochster_dual().order().to_json()).expect("serialisable"),
        SpectralOp::Skula => json!(x.skula_opens().into_iter().map(names).collect::<Vec<_>>()),
        SpectralOp::Visible => json!({ "visible": names(x.visible_points()) }),
        SpectralOp::WeaklyIsolated => {
            let c = closed.ok_or_else(|| input_error("`weakly-isolated` needs --closed"))?;
            let set: Vec<&str> = c.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            json!({ "points": x.weakly_isolated_points(&set)? })
        }
        SpectralOp::Scattered => json!({
            "scattered": x.is_scattered(),
            "weakly_scattered": x.is_weakly_scattered(),
            "t_half": x.is_t_half(),
            "hochster_scattered": x.is_hochster_scattered(),
            "hochster_weakly_scattered": x.is_hochster_weakly_scattered(),
        }),
    })
}

fn frames_cmd(cli: &Cli, op: FramesOp, input: &str, lattice: bool, element: Option<&str>) -> Outcome<Value> {
    let space = if lattice { None } else { Some(read_space(cli, input)?) };
    let f = match &space {
        Some(x) => frames::frame_of(x),
        None => FiniteFrame::from_poset(FinitePoset::from_json(&parse::<PosetJson>(read_json(input)?, "lattice")?)?)?,
    };
    let needs_space = || space.as_ref().ok_or_else(|| input_error("this operation needs a space, not a lattice"));
    Ok(match op {
        FramesOp::Opens => to_value(&f.summary()),
        FramesOp::Boolean => json!({ "boolean": f.is_boolean() }),
        FramesOp::Primes => json!({ "primes": f.names_of(&f.primes()) }),
        FramesOp::Essential => {
            let x = match element {
                Some(name) => f.index_of(name)?,
                None => f.bottom(),
            };
            json!({
                "element": f.name(x),
                "min_primes": f.names_of(&f.min_primes(x)),
                "essential": f.names_of(&f.essential_primes(x)),
            })
        }
        FramesOp::Spc => {
            let s = frames::spc(&f);
            json!({ "points": s.space.order().elements(), "is_spatial": s.is_spatial })
        }
        FramesOp::Assembly => assembly_value(&f, cli.max_frame)?,
        FramesOp::Skula => to_value(&frames::skula_frame(needs_space()?).summary()),
        FramesOp::Sigma => {
            let s = frames::sigma(needs_space()?, cli.max_frame)?;
            json!({ "is_isomorphism": s.is_isomorphism, "map": to_value(&s.hom) })
        }
        FramesOp::Conditions => to_value(&frames::weakly_scattered_conditions(needs_space()?, cli.max_frame)?),
    })
}

fn assembly_value(f: &FiniteFrame, max_frame: usize) -> Outcome<Value> {
    let asm = frames::assembly(f, max_frame)?;
    Ok(json!({
        "count": asm.nuclei().len(),
        "boolean": asm.frame().is_boolean(),
        "nuclei": serde_json::to_value(asm.tables()).expect("serialisable"),
    }))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serialisable")
}

fn descriptor(s: &SupportDescriptor) -> Value {
    serde_json::to_value(s).expect("serialisable")
}

fn primes_value(ps: &BTreeSet<Prime>) -> Value {
    json!(ps.iter().map(ToString::to_string).collect::<Vec<_>>())
}

fn support_cmd(op: SupportOp, input: &str, invert: Option<&str>) -> Outcome<Report> {
    let c = read_complex(input)?;
    let v = match op {
        SupportOp::Small => descriptor(&support::small_support(&c)?),
        SupportOp::Big => descriptor(&support::big_support(&c)?),
        SupportOp::Foxby => descriptor(&support::foxby_support(&c)?),
        SupportOp::Ass => json!({ "primes": primes_value(&support::weakly_associated_cohomology(&c)?) }),
        SupportOp::Vanish => json!({ "vanishes": support::detect_vanishing(&c)? }),
        SupportOp::Cohomology => {
            let hs = cohomology_all(&c)?;
            json!({ "cohomology": hs.iter().map(|(i, h)| json!({"degree": i, "module": h.to_string()})).collect::<Vec<_>>() })
        }
        SupportOp::Localize => {
            let list = invert.ok_or_else(|| input_error("`localize` needs --invert"))?;
            let w: BTreeSet<u64> = list
                .split(',')
                .map(|s| s.trim().parse::<u64>().map_err(|e| input_error(format!("bad prime `{s}`: {e}"))))
                .collect::<Outcome<_>>()?;
            serde_json::to_value(support::localize_support_check(&c, &w)?).expect("serialisable")
        }
        SupportOp::Suite => return support_battery(&c),
    };
    Ok(Report::Value(v))
}

/// Every support property that applies to a single complex.
fn support_battery(c: &ChainComplex) -> Outcome<Report> {
    let small = support::small_support(c)?;
    let big = support::big_support(c)?;
    let mut checks = vec![
        ("vanishing", small.is_empty() == is_acyclic(c)?),
        ("small_in_big", small.is_subset(&big)?),
        ("exhaustive_sequences", support::small_support_exhaustive(c)? == small),
    ];
    if c.ring().is_integral() && !c.is_tagged() {
        checks.push(("foxby", support::foxby_support(c)? == small));
    }
    let ass = support::minimal_primes(&support::weakly_associated_cohomology(c)?);
    checks.push(("minimal_ass", ass.iter().all(|q| small.contains(q))));
    let mut main1 = Vec::new();
    if let Some(points) = support::spec(c.ring()).points().filter(|_| !c.ring().is_integral()) {
        let points = points.to_vec();
        for mask in 0u64..(1 << points.len()) {
            let v: BTreeSet<Prime> = (0..points.len()).filter(|i| mask >> i & 1 == 1).map(|i| points[i]).collect();
            let r = support::main1_property_suite(c, c, &v)?;
            checks.push(("main1", r.all_pass()));
            main1.push(json!({ "v": primes_value(&v), "report": serde_json::to_value(&r).expect("serialisable") }));
        }
    }
    let ok = checks.iter().all(|(_, b)| *b);
    let v = json!({
        "ring": c.ring().to_string(),
        "small": descriptor(&small),
        "big": descriptor(&big),
        "checks": checks.iter().map(|(n, b)| json!({"check": n, "pass": b})).collect::<Vec<_>>(),
        "main1": main1,
        "pass": ok,
    });
    Ok(Report::Value(v))
}

fn axioms_cmd(cli: &Cli, op: AxiomsOp, input: &str) -> Outcome<Value> {
    let samples = cli.samples.unwrap_or(axioms::DEFAULT_COVER_SAMPLES);
    match op {
        AxiomsOp::Thomason => {
            let x = read_space(cli, input)?;
            let t = axioms::thomason_frame(&x);
            return Ok(serde_json::to_value(t.summary()).expect("serialisable"));
        }
        AxiomsOp::Ring => {
            let ring = BaseRing::from_json(&parse::<RingJson>(read_json(input)?, "ring")?)?;
            let d = axioms::datum_from_ring(&ring)?;
            return Ok(serde_json::to_value(d.to_json()).expect("serialisable"));
        }
        _ => {}
    }
    let d = SupportDatum::from_json(&parse::<DatumJson>(read_json(input)?, "support datum")?)?;
    if d.space().len() > cli.max_poset {
        return Err(Error::Bound {
            bound: "max-poset",
            limit: cli.max_poset,
            required: d.space().len(),
        }
        .into());
    }
    Ok(match op {
        AxiomsOp::Check => serde_json::to_value(check_complements(&d)).expect("serialisable"),
        AxiomsOp::Eta => {
            serde_json::to_value(construct_eta(&d, samples, cli.seed, cli.max_frame)?).expect("serialisable")
        }
        AxiomsOp::Supportive => json!({ "supportive": is_supportive(&d, samples, cli.seed, cli.max_frame)? }),
        AxiomsOp::Thomason | AxiomsOp::Ring => unreachable!("handled above"),
    })
}
