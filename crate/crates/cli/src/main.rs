use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use excov::acceptance::Suite;
use excov::error::{Error, Result};
use excov::except::Scanner;
use excov::exec::Exec;
use excov::frobset::{fit_from_samples, FrobeniusSet};
use excov::gf::{parse_field_spec, FieldCtx, DEFAULT_CAP};
use excov::grouptheory::{
    analyze_rep, coset_exceptionality, cyclic_model, davenport_trace_test, dickson_model, idp_trace_test,
    offdiagonal_components, parse_perms, sdp_check, Mode, MonodromyData, MonodromySpec, PermGroup,
};
use excov::lattes::{median_value_check, oit_scan, EllipticCurveQ};
use excov::nielsen::{
    braid_orbit, dickson_cycles, dickson_tower_cycles, difference_sets, modular_nielsen, rational_union_check,
    rh_genus, validate_tuple, Equivalence,
};
use excov::pencil::{kf_cross_check, pencil_scan};
use excov::projmap::{decompose_tame_poly, parse_map, Decomposition, P1Point, RationalMap};

#[derive(Parser)]
#[command(name = "excov", version, about = "Exceptional covers and Davenport pairs over finite fields")]
struct Cli {
    /// tab-separated output instead of JSON
    #[arg(long, global = true)]
    tsv: bool,
    /// JSON output (the default)
    #[arg(long, global = true, conflicts_with = "tsv")]
    json: bool,
    /// field-size cap; overrides EXCOV_CAP
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// run scans on the calling thread only
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a finite field
    Field {
        #[arg(long)]
        field: String,
        /// list the elements (fields of order at most 4096)
        #[arg(long)]
        elements: bool,
    },
    /// Describe a rational map
    Map {
        #[arg(long)]
        field: String,
        #[arg(long)]
        map: String,
        /// also test bijectivity on P1(F_{q^t})
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        decompose: bool,
    },
    /// Bijectivity scan over t = 1..tmax with a fitted exceptionality set
    Scan {
        #[arg(long)]
        field: String,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 12)]
        tmax: u32,
        #[arg(long, default_value_t = excov::except::DEFAULT_D_MAX)]
        dmax: u64,
    },
    /// Build a Frobenius set from residues, or fit one to 0/1 samples
    Frobset {
        #[arg(long = "mod")]
        modulus: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        residues: Vec<u64>,
        /// samples for t = 1, 2, …, e.g. 1,0,1,1
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["modulus", "residues"])]
        samples: Vec<u8>,
        #[arg(long)]
        dmax: Option<u64>,
    },
    /// Range and fiber comparison of two maps
    Dp {
        #[arg(long)]
        field: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 2)]
        tmax: u32,
    },
    /// Permutation group analysis and coset tests
    Group(GroupArgs),
    /// Branch cycles, braid orbits and related combinatorics
    Nielsen {
        #[command(subcommand)]
        command: NielsenCommand,
    },
    /// Lattès bijectivity scan against the fixed-point prediction
    Oit {
        #[arg(long, default_value = "ogg")]
        curve: String,
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long, default_value_t = 60)]
        lmax: u64,
        #[arg(long, default_value_t = 1)]
        tmax: u32,
        /// include point counts at supersingular primes up to this t
        #[arg(long)]
        median: Option<u32>,
    },
    /// Pencil error sums and the off-diagonal count of f(x) = f(y)
    Pencil {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: String,
        /// monodromy model for the component cross-check: cyclic:n or dickson:n
        #[arg(long)]
        model: Option<String>,
    },
    /// Run the acceptance suite
    Selftest {
        /// criteria to run (default: all)
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Args)]
struct GroupArgs {
    /// generators, cycle notation or [images]
    #[arg(long = "gen")]
    gens: Vec<String>,
    #[arg(long)]
    tau: Option<String>,
    /// MonodromyData JSON file
    #[arg(long, conflicts_with_all = ["gens", "tau"])]
    spec: Option<String>,
}

#[derive(Subcommand)]
enum NielsenCommand {
    /// The branch cycle triple of the degree-n Dickson cover
    Dickson {
        #[arg(long)]
        n: u64,
    },
    /// Branch cycles of a fiber-product tower of Dickson covers
    Tower {
        #[arg(long)]
        n: u64,
        #[arg(long, value_delimiter = ',')]
        labels: Vec<u64>,
    },
    /// Classes of four involutions in (Z/p^(k+1))^2 ⋊ ±1
    Modular {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        k: u32,
    },
    /// Validate a tuple and compute its genus and inner braid orbit
    Tuple {
        #[arg(long = "perm", required = true)]
        perms: Vec<String>,
        #[arg(long)]
        orbit: bool,
    },
    /// Rational-union test for classes of a group modulo a normalizing group
    Ratunion {
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        #[arg(long = "class", required = true)]
        classes: Vec<String>,
        /// extra generators of the normalizing group
        #[arg(long = "norm")]
        normalizer: Vec<String>,
    },
    /// Cyclic difference sets up to translation
    Diffsets {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        lambda: u64,
    },
}

struct Ctx {
    cap: u64,
    exec: Exec,
}

impl Ctx {
    fn field(&self, spec: &str) -> Result<Arc<FieldCtx>> {
        parse_field_spec(spec, self.cap)
    }

    fn scanner(&self, base: Arc<FieldCtx>) -> Scanner {
        Scanner::with_cap(base, self.cap).with_exec(self.exec)
    }
}

fn cap_from_env() -> std::result::Result<u64, Error> {
    match std::env::var("EXCOV_CAP") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| Error::invalid(format!("EXCOV_CAP must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn point_literal(field: &FieldCtx, x: P1Point) -> String {
    match x {
        P1Point::Infinity => "inf".into(),
        P1Point::Finite(e) => field.format_elem(e),
    }
}

fn run(cli: &Cli) -> Result<(Value, bool)> {
    let cap = match cli.cap {
        Some(0) => return Err(Error::invalid("--cap must be positive")),
        Some(c) => c,
        None => cap_from_env()?,
    };
    let ctx = Ctx { cap, exec: if cli.sequential { Exec::Sequential } else { Exec::default() } };
    let ok = |v: Value| Ok((v, true));
    match &cli.command {
        Command::Field { field, elements } => {
            let f = ctx.field(field)?;
            let mut out = json!({
                "field": f.spec(),
                "characteristic": f.characteristic(),
                "degree": f.degree(),
                "order": f.order(),
                "modulus": f.modulus_indices(),
                "representation": if f.is_table() { "table" } else { "polynomial" },
            });
            if *elements {
                if f.order() > 4096 {
                    return Err(Error::cap("element listing", f.order() as u128, 4096));
                }
                out["elements"] = f.elements().map(|e| f.format_elem(e)).collect();
            }
            ok(out)
        }
        Command::Map { field, map, t, decompose } => {
            let f = ctx.field(field)?;
            let m = parse_map(&f, map)?;
            let mut out = json!({
                "field": f.spec(),
                "map": m.spec(),
                "degree": m.degree(),
                "polynomial": m.is_polynomial(),
                "value_at_infinity": point_literal(&f, m.value_at_infinity()),
            });
            if let Some(t) = t {
                out["t"] = json!(t);
                out["bijective"] = json!(ctx.scanner(f.clone()).is_bijective_on(&m, *t)?);
            }
            if *decompose {
                if !m.is_polynomial() {
                    return Err(Error::Unsupported("decomposition is implemented for polynomials".into()));
                }
                out["decomposition"] = match decompose_tame_poly(m.num())? {
                    Decomposition::Indecomposable => json!([]),
                    Decomposition::Decomposable(pairs) => pairs
                        .into_iter()
                        .map(|(g, h)| {
                            json!({
                                "outer": RationalMap::poly(g).map(|x| x.spec()).unwrap_or_default(),
                                "inner": RationalMap::poly(h).map(|x| x.spec()).unwrap_or_default(),
                            })
                        })
                        .collect(),
                };
            }
            ok(out)
        }
        Command::Scan { field, map, tmax, dmax } => {
            let f = ctx.field(field)?;
            let m = parse_map(&f, map)?;
            ok(to_value(&ctx.scanner(f).exceptionality_scan(&m, *tmax, *dmax)?))
        }
        Command::Frobset { modulus, residues, samples, dmax } => {
            let set = if samples.is_empty() {
                let d = modulus.ok_or_else(|| Error::invalid("--mod is required without --samples"))?;
                FrobeniusSet::from_residues(d, residues.iter().copied())?
            } else {
                let bits: Vec<bool> = samples
                    .iter()
                    .map(|&b| match b {
                        0 => Ok(false),
                        1 => Ok(true),
                        _ => Err(Error::invalid("samples must be 0 or 1")),
                    })
                    .collect::<Result<_>>()?;
                let d_max = dmax.unwrap_or(bits.len() as u64 / 2);
                match fit_from_samples(&bits, d_max)? {
                    Some(s) => s,
                    None => return ok(json!({ "fitted": false, "d_max": d_max })),
                }
            };
            ok(to_value(&set))
        }
        Command::Dp { field, f, g, tmax } => {
            let base = ctx.field(field)?;
            let (fm, gm) = (parse_map(&base, f)?, parse_map(&base, g)?);
            let scanner = ctx.scanner(base.clone());
            let reach = scanner.tower().max_level(*tmax);
            let mut rows = Vec::new();
            for t in 1..=reach {
                rows.push(json!({
                    "t": t,
                    "dp": scanner.dp_range_test(&fm, &gm, t)?,
                    "idp": scanner.idp_multiset_test(&fm, &gm, t)?,
                }));
            }
            ok(json!({ "field": base.spec(), "f": fm.spec(), "g": gm.spec(), "t_reached": reach, "results": rows }))
        }
        Command::Group(args) => group(args),
        Command::Nielsen { command } => nielsen(command),
        Command::Oit { curve, p, lmax, tmax, median } => {
            let e = EllipticCurveQ::parse(curve)?;
            let report = oit_scan(&e, *p, *lmax, *tmax, ctx.cap)?;
            let mut out = to_value(&report);
            out["curve"] = json!({ "a": e.a, "discriminant": e.discriminant.to_string(), "j": format!("{}/{}", e.j.num, e.j.den) });
            if let Some(t_max) = median {
                let mut checks = Vec::new();
                for entry in report.entries.iter().filter(|x| x.t == 1 && x.a_l == 0) {
                    checks.push(to_value(&median_value_check(&e.reduce(entry.l)?, *t_max, ctx.cap)?));
                }
                out["median"] = Value::Array(checks);
            }
            let pass = report.mismatches == 0;
            Ok((out, pass))
        }
        Command::Pencil { p, f, model } => {
            let field = ctx.field(&p.to_string())?;
            let m = parse_map(&field, f)?;
            if !m.is_polynomial() {
                return Err(Error::invalid("pencil needs a polynomial"));
            }
            let mut out = to_value(&pencil_scan(m.num())?);
            if let Some(spec) = model {
                let (kind, n) = spec
                    .split_once(':')
                    .and_then(|(k, n)| n.trim().parse::<u64>().ok().map(|n| (k.trim(), n)))
                    .ok_or_else(|| Error::Parse { line: 1, col: 1, msg: format!("expected cyclic:n or dickson:n, got {spec:?}") })?;
                let data = match kind {
                    "cyclic" => cyclic_model(n, *p)?,
                    "dickson" => dickson_model(n, *p)?,
                    other => return Err(Error::invalid(format!("unknown model {other:?}"))),
                };
                out["kf_check"] = to_value(&kf_cross_check(m.num(), &data)?);
            }
            ok(out)
        }
        Command::Selftest { only } => {
            let suite = Suite::new(ctx.exec);
            let ids: Vec<u8> = if only.is_empty() { (1..=12).collect() } else { only.clone() };
            let mut rows = Vec::new();
            let mut all = true;
            for id in ids {
                let r = suite.run(id);
                eprintln!("{}", r.line());
                all &= r.pass;
                rows.push(json!({
                    "id": r.id,
                    "name": r.name,
                    "pass": r.pass,
                    "detail": r.detail,
                    "budget_seconds": r.budget,
                }));
            }
            Ok((json!({ "pass": all, "criteria": rows }), all))
        }
    }
}

fn group(args: &GroupArgs) -> Result<(Value, bool)> {
    let data = if let Some(path) = &args.spec {
        let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("{path}: {e}")))?;
        let spec: MonodromySpec = serde_json::from_str(&text)
            .map_err(|e| Error::Parse { line: e.line(), col: e.column(), msg: e.to_string() })?;
        Some(MonodromyData::from_spec(&spec)?)
    } else if let Some(tau) = &args.tau {
        let mut all = args.gens.clone();
        all.push(tau.clone());
        let mut perms = parse_perms(&all, None)?;
        let tau = perms.pop().expect("tau present");
        Some(MonodromyData::new(perms, tau)?)
    } else {
        None
    };
    let (group, first) = match &data {
        Some(m) => (m.geom().clone(), m.degree1()),
        None => {
            if args.gens.is_empty() {
                return Err(Error::invalid("give --gen at least once, or --spec"));
            }
            let perms = parse_perms(&args.gens, None)?;
            let n = perms[0].degree();
            (PermGroup::generate(n, &perms)?, n)
        }
    };
    let restricted = if first == group.degree() {
        group.clone()
    } else {
        let gens: Vec<_> = group
            .gens()
            .iter()
            .map(|g| excov::grouptheory::Perm::from_images(g.images()[..first].to_vec()))
            .collect::<Result<_>>()?;
        PermGroup::generate(first, &gens)?
    };
    let mut out = json!({
        "degree": group.degree(),
        "order": group.order(),
        "analysis": to_value(&analyze_rep(&restricted)),
        "orbits": group.orbits().iter().map(|o| o.iter().map(|&i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    if let Some(m) = &data {
        let mut mono = json!({
            "d": m.d(),
            "exceptional": to_value(&coset_exceptionality(m, Mode::Exceptional)?),
            "pr_exceptional": to_value(&coset_exceptionality(m, Mode::PrExceptional)?),
        });
        if m.has_second_action() {
            mono["davenport"] = to_value(&davenport_trace_test(m)?);
            mono["isovalent"] = to_value(&idp_trace_test(m)?);
            mono["sdp"] = to_value(&sdp_check(m)?);
        } else {
            let (geometric, stable, arithmetic) = offdiagonal_components(m)?;
            mono["components"] = json!({ "geometric": geometric, "stable": stable, "arithmetic": arithmetic });
        }
        out["monodromy"] = mono;
    }
    Ok((out, true))
}

fn nielsen(cmd: &NielsenCommand) -> Result<(Value, bool)> {
    let tuple_json = |t: &[excov::grouptheory::Perm]| t.iter().map(|g| g.to_string()).collect::<Vec<_>>();
    let out = match cmd {
        NielsenCommand::Dickson { n } => {
            let t = dickson_cycles(*n)?;
            let group = PermGroup::generate(*n as usize, &t)?;
            let check = validate_tuple(&t, &group, None)?;
            json!({
                "n": n,
                "tuple": tuple_json(&t),
                "group_order": group.order(),
                "check": to_value(&check),
                "genus": rh_genus(&t)?,
            })
        }
        NielsenCommand::Tower { n, labels } => to_value(&dickson_tower_cycles(*n, labels)?),
        NielsenCommand::Modular { p, k } => to_value(&modular_nielsen(*p, *k)?),
        NielsenCommand::Tuple { perms, orbit } => {
            let t = parse_perms(perms, None)?;
            let n = t[0].degree();
            let group = PermGroup::generate(n, &t)?;
            let mut out = json!({
                "tuple": tuple_json(&t),
                "group_order": group.order(),
                "check": to_value(&validate_tuple(&t, &group, None)?),
                "genus": rh_genus(&t)?,
            });
            if *orbit {
                out["inner_orbit_size"] = json!(braid_orbit(&t, &Equivalence::Inner(group))?.len());
            }
            out
        }
        NielsenCommand::Ratunion { gens, classes, normalizer } => {
            let all: Vec<&String> = gens.iter().chain(classes).chain(normalizer).collect();
            let mut perms = parse_perms(&all, None)?;
            let extra = perms.split_off(gens.len() + classes.len());
            let cls = perms.split_off(gens.len());
            let n = perms[0].degree();
            let group = PermGroup::generate(n, &perms)?;
            let norm = PermGroup::generate(n, &[perms.clone(), extra].concat())?;
            to_value(&rational_union_check(&cls, &group, &norm)?)
        }
        NielsenCommand::Diffsets { n, k, lambda } => {
            json!({ "n": n, "k": k, "lambda": lambda, "sets": difference_sets(*n, *k, *lambda)? })
        }
    };
    Ok((out, true))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// First array of objects becomes a table; remaining fields become
/// `key<TAB>value` lines.
fn render_tsv(v: &Value) -> String {
    let mut out = String::new();
    let Value::Object(map) = v else {
        return format!("{}\n", scalar(v));
    };
    let table = map.iter().find_map(|(k, x)| match x {
        Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_object) => Some((k.clone(), rows)),
        _ => None,
    });
    for (k, x) in map {
        if table.as_ref().is_some_and(|t| &t.0 == k) {
            continue;
        }
        out.push_str(&format!("{k}\t{}\n", scalar(x)));
    }
    if let Some((_, rows)) = table {
        let header: Vec<String> = rows[0].as_object().map(|o| o.keys().cloned().collect()).unwrap_or_default();
        out.push_str(&header.join("\t"));
        out.push('\n');
        for row in rows {
            let empty = Map::new();
            let obj = row.as_object().unwrap_or(&empty);
            let cells: Vec<String> = header.iter().map(|h| obj.get(h).map(scalar).unwrap_or_default()).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
    }
    out
}

fn error_json(e: &Error) -> Value {
    let kind = match e {
        Error::Invalid(_) => "invalid",
        Error::Cap { .. } => "cap",
        Error::FieldMismatch(_) => "field_mismatch",
        Error::Unsupported(_) => "unsupported",
        Error::Invariant(_) => "invariant",
        Error::Parse { .. } => "parse",
    };
    let mut v = json!({ "error": { "kind": kind, "message": e.to_string() } });
    if let Error::Parse { line, col, .. } = e {
        v["error"]["line"] = json!(line);
        v["error"]["col"] = json!(col);
    }
    v
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, pass)) => {
            let text = if cli.tsv {
                render_tsv(&value)
            } else {
                format!("{}\n", serde_json::to_string_pretty(&value).expect("json"))
            };
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            let _ = stdout.flush();
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(Error::Invariant(String::new()).exit_code() as u8)
            }
        }
        Err(e) => {
            eprintln!("{}", serde_json::to_string_pretty(&error_json(&e)).expect("json"));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
