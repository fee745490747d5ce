use std::io::Write;
use std::path::Path;

use anticyc::compare::{compare, default_grid, Pair};
use anticyc::euler::{
    cross_path_check, euler_element, places_above, rankin_selberg_check_with, HeckeFormData,
};
use anticyc::gauss_theta::{global_gauss_sum_of, theta_coeffs};
use anticyc::hecke::{AnticycloChar, DirichletChar};
use anticyc::iwasawa::{
    mu_lambda, specialization_separates, specialize_arith, twist, wprep, PowerSeries1,
    PowerSeries2,
};
use anticyc::padic::{PrecisionPolicy, Zp};
use anticyc::quad::{setup_report, splitting_type, validate_setup, FormFacts, QuadSetup, Splitting, Verdict};
use anticyc::suite::{self, PropertyResult, Scenario};
use anticyc::Error;
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::{CharArgs, Cli, Command, SeriesInput, SetupArgs};

const GRID_PRECISION: PrecisionPolicy = PrecisionPolicy {
    digits: 15,
    series_terms: 20,
    weight_terms: 8,
};
const GRID_SAMPLES: usize = 100;
const GRID_N_MAX: u32 = 2;
const GRID_THETA_BOUND: u64 = 1000;
const GRID_RANKIN_BOUND: u64 = 50;
const HECKE_R_MAX: u32 = 64;

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure::Usage(msg.into()))
}

struct Outcome {
    value: Value,
    pass: bool,
}

struct Ctx {
    cfg: RunConfig,
    precision_flag: Option<String>,
}

impl Ctx {
    fn policy(&self, base: PrecisionPolicy) -> Res<PrecisionPolicy> {
        self.cfg
            .precision(base, self.precision_flag.as_deref())
            .map_err(Failure::Usage)
    }
}

pub fn run(cli: Cli) -> u8 {
    let cfg = match &cli.config {
        Some(p) => match RunConfig::load(p) {
            Ok(c) => c,
            Err(e) => return emit_failure(None, Failure::Usage(e)),
        },
        None => RunConfig::default(),
    };
    let out_path = cli
        .output
        .clone()
        .or_else(|| cfg.output.as_ref().map(Into::into))
        .filter(|p| p.as_os_str() != "-");
    let ctx = Ctx {
        cfg,
        precision_flag: cli.precision.clone(),
    };
    // reject a malformed precision even for commands that never read it
    if let Err(e) = ctx.cfg.precision(PrecisionPolicy::default(), ctx.precision_flag.as_deref()) {
        return emit_failure(out_path.as_deref(), Failure::Usage(e));
    }
    let result = match cli.threads {
        Some(0) => usage("--threads must be positive"),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&ctx, &cli.command)),
            Err(e) => usage(format!("thread pool: {e}")),
        },
        None => dispatch(&ctx, &cli.command),
    };
    match result {
        Ok(o) => {
            if let Err(e) = write_json(out_path.as_deref(), &o.value) {
                eprintln!("error: {e}");
                return 1;
            }
            if o.pass {
                0
            } else {
                2
            }
        }
        Err(f) => emit_failure(out_path.as_deref(), f),
    }
}

fn write_json(path: Option<&Path>, v: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("serializable");
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn emit_failure(path: Option<&Path>, f: Failure) -> u8 {
    let v = match &f {
        Failure::Usage(m) => json!({"error": "usage", "message": m}),
        Failure::Lib(Error::InvalidSetup(cl)) => json!({
            "error": "invalid_setup",
            "message": Error::InvalidSetup(cl.clone()).to_string(),
            "clauses": cl.iter().map(|c| c.key()).collect::<Vec<_>>(),
        }),
        Failure::Lib(e) => json!({"error": "computation", "message": e.to_string()}),
    };
    eprintln!("error: {}", v["message"].as_str().unwrap_or_default());
    let _ = write_json(path, &v);
    1
}

fn dispatch(ctx: &Ctx, cmd: &Command) -> Res<Outcome> {
    match cmd {
        Command::CheckSetup { setup, form } => check_setup(ctx, setup, form.as_deref()),
        Command::Gauss { setup, chr } => gauss(ctx, setup, chr),
        Command::Theta {
            setup,
            chr,
            bound,
            hecke,
        } => theta(ctx, setup, chr, *bound, *hecke),
        Command::Rankin {
            setup,
            chr,
            form,
            q_max,
            poison,
        } => rankin(ctx, setup, chr, form.as_deref(), *q_max, poison.as_deref()),
        Command::EulerElement { setup, chr, form, l } => {
            euler(ctx, setup, chr, form.as_deref(), *l)
        }
        Command::Wprep { input } => wprep_cmd(ctx, input),
        Command::Invariants { input } => invariants(ctx, input),
        Command::Twist { input, eta } => twist_cmd(ctx, input, eta),
        Command::Specialize {
            input,
            k,
            zeta_n,
            zeta_exp,
            separate,
        } => specialize(ctx, input, *k, *zeta_n, *zeta_exp, *separate),
        Command::Compare {
            pair,
            k,
            p,
            disc,
            n_max,
            chars,
            form,
        } => compare_cmd(ctx, pair, *k, *p, *disc, *n_max, chars.as_deref(), form.as_deref()),
        Command::Grid {
            n_max,
            samples,
            seed,
            poison,
        } => grid(ctx, *n_max, *samples, *seed, *poison),
    }
}

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

// ---- setup, forms, characters ----

struct Resolved {
    d: i64,
    p: u64,
    level: Option<u64>,
    factorization: Option<(u64, u64)>,
}

fn resolve_setup(ctx: &Ctx, a: &SetupArgs, form: Option<&HeckeFormData>) -> Res<Resolved> {
    let c = &ctx.cfg.setup;
    let d = match a.disc.or(c.d) {
        Some(d) => d,
        None => return usage("missing --disc (or setup.D in the config)"),
    };
    let p = match a.p.or(c.p).or(form.map(|f| f.p)) {
        Some(p) => p,
        None => return usage("missing --p (or setup.p in the config)"),
    };
    let level = a.level.or(c.level).or(form.map(|f| f.level));
    let np = a.n_plus.or(c.n_plus);
    let nm = a.n_minus.or(c.n_minus);
    let factorization = match (np, nm, level) {
        (None, None, _) => None,
        (Some(x), Some(y), _) => Some((x, y)),
        (Some(x), None, Some(n)) if x > 0 && n % x == 0 => Some((x, n / x)),
        (None, Some(y), Some(n)) if y > 0 && n % y == 0 => Some((n / y, y)),
        _ => return usage("N+ and N- must multiply to N"),
    };
    if let Some((x, y)) = factorization {
        if level.is_some_and(|n| n != x * y) {
            return usage("N+ and N- must multiply to N");
        }
    }
    Ok(Resolved {
        d,
        p,
        level,
        factorization,
    })
}

fn setup_json(q: &QuadSetup) -> Value {
    json!({
        "D": s(q.d),
        "p": s(q.p),
        "N": s(q.level),
        "n_plus": s(q.n_plus),
        "n_minus": s(q.n_minus),
    })
}

/// A validated setup when a level is known, else the bare field data at p (no form hypotheses).
fn field_setup(r: &Resolved) -> Res<QuadSetup> {
    match r.level {
        Some(n) => Ok(validate_setup(r.d, r.p, n, r.factorization)?),
        None => {
            anticyc::quad::QuadField::new(r.d)?;
            Ok(QuadSetup {
                d: r.d,
                p: r.p,
                level: 1,
                n_plus: 1,
                n_minus: 1,
            })
        }
    }
}

fn load_form(spec: &str) -> Res<HeckeFormData> {
    if HeckeFormData::builtin_labels().contains(&spec) {
        return Ok(HeckeFormData::builtin(spec)?);
    }
    match std::fs::read_to_string(spec) {
        Ok(text) => Ok(HeckeFormData::from_json(&text)?),
        Err(e) => usage(format!(
            "form {spec:?} is neither a builtin ({}) nor a readable file: {e}",
            HeckeFormData::builtin_labels().join(", ")
        )),
    }
}

/// The flag, then the config, then the first builtin matching the weight and prime.
fn pick_form(ctx: &Ctx, flag: Option<&str>, k: Option<u32>, p: Option<u64>) -> Res<HeckeFormData> {
    if let Some(f) = flag.or(ctx.cfg.form.as_deref()) {
        return load_form(f);
    }
    for l in HeckeFormData::builtin_labels() {
        let f = HeckeFormData::builtin(l)?;
        if k.map_or(true, |k| k == f.k) && p.map_or(true, |p| p == f.p) {
            return Ok(f);
        }
    }
    usage("no builtin form matches; pass --form")
}

fn dirichlet(p: u64, c: &CharArgs) -> Res<DirichletChar> {
    match c.chr.as_str() {
        "trivial" => Ok(DirichletChar::trivial(p)),
        "quadratic" => {
            if c.n != 1 {
                return usage("the quadratic character has conductor p (--n 1)");
            }
            Ok(DirichletChar::quadratic(p)?)
        }
        j => match j.parse::<u64>() {
            Ok(j) => Ok(DirichletChar::new(p, c.n, j)?),
            Err(_) => usage(format!("--char must be trivial, quadratic or an integer, got {j:?}")),
        },
    }
}

fn anticyclo(setup: &QuadSetup, c: &CharArgs) -> Res<AnticycloChar> {
    Ok(AnticycloChar::build(setup, dirichlet(setup.p, c)?, 0)?)
}

fn parse_char_list(setup: &QuadSetup, items: &[String]) -> Res<Vec<AnticycloChar>> {
    let mut out = Vec::new();
    for it in items {
        let Some((n, j)) = it.split_once(':') else {
            return usage(format!("character {it:?} is not of the form n:j"));
        };
        let (Ok(n), Ok(j)) = (n.trim().parse::<u32>(), j.trim().parse::<u64>()) else {
            return usage(format!("character {it:?} is not of the form n:j"));
        };
        out.push(AnticycloChar::build(setup, DirichletChar::new(setup.p, n, j)?, 0)?);
    }
    Ok(out)
}

// ---- subcommands ----

fn check_setup(ctx: &Ctx, a: &SetupArgs, form: Option<&str>) -> Res<Outcome> {
    let f = match form.or(ctx.cfg.form.as_deref()) {
        Some(x) => Some(load_form(x)?),
        None => None,
    };
    let r = resolve_setup(ctx, a, f.as_ref())?;
    let Some(level) = r.level else {
        return usage("missing --level (or setup.N in the config)");
    };
    let facts = match &f {
        Some(f) => Some(FormFacts {
            k: f.k,
            a_p: f.a(r.p)?,
            level: f.level,
        }),
        None => None,
    };
    let report = setup_report(r.d, r.p, level, r.factorization, facts.as_ref())?;
    let pass = report.iter().all(|(_, v)| *v != Verdict::Fail);
    let clauses: Vec<Value> = report
        .iter()
        .map(|(c, v)| {
            json!({
                "key": c.key(),
                "statement": c.statement(),
                "verdict": serde_json::to_value(v).expect("verdict"),
            })
        })
        .collect();
    let mut setup = json!({"D": s(r.d), "p": s(r.p), "N": s(level)});
    if let Some((x, y)) = r.factorization {
        setup["n_plus"] = s(x);
        setup["n_minus"] = s(y);
    }
    Ok(Outcome {
        value: json!({
            "setup": setup,
            "form": f.as_ref().map(|f| f.label.clone()),
            "clauses": clauses,
            "pass": pass,
        }),
        pass,
    })
}

fn gauss(ctx: &Ctx, a: &SetupArgs, c: &CharArgs) -> Res<Outcome> {
    let r = resolve_setup(ctx, a, None)?;
    let eps = dirichlet(r.p, c)?;
    anticyc::quad::QuadField::new(r.d)?;
    // when p splits the character must also pass the unit check
    if splitting_type(r.p, r.d) == Splitting::Split {
        AnticycloChar::build(&field_setup(&r)?, eps.clone(), 0)?;
    }
    let g = global_gauss_sum_of(&eps)?;
    Ok(Outcome {
        value: json!({
            "value": s(&g.value),
            "sign": if g.sign > 0 { "+" } else { "-" },
        }),
        pass: true,
    })
}

fn cyc_json(x: &anticyc::cyclotomic::CycElem) -> Value {
    match x.as_integer() {
        Some(v) => s(v),
        None => Value::Array(x.coeffs().iter().map(s).collect()),
    }
}

fn theta(ctx: &Ctx, a: &SetupArgs, c: &CharArgs, bound: u64, hecke: bool) -> Res<Outcome> {
    if bound < 1 {
        return usage("--bound must be at least 1");
    }
    let r = resolve_setup(ctx, a, None)?;
    let setup = field_setup(&r)?;
    let chi = anticyclo(&setup, c)?;
    let th = theta_coeffs(&chi, bound)?;
    let coeffs: Vec<Value> = (0..=bound).map(|n| cyc_json(&th.coeff_cyc(n))).collect();
    let mut v = json!({
        "character": serde_json::to_value(chi.spec()).expect("spec"),
        "bound": s(bound),
        "weight": th.weight,
        "level": s(th.level),
        "cusp": th.cusp,
        "coefficients": coeffs,
    });
    let mut pass = true;
    if hecke {
        let mut res = PropertyResult::new("theta_hecke");
        for l in 2..=bound {
            if !is_prime(l) || th.level % l == 0 {
                continue;
            }
            let rep = th.hecke_check(l, HECKE_R_MAX)?;
            res.checked += rep.checked;
            if !rep.pass {
                res.failed += 1;
                if res.counterexample.is_none() {
                    res.counterexample = rep.counterexample;
                }
            }
        }
        pass = res.pass();
        v["hecke"] = property_json(&res);
    }
    v["pass"] = json!(pass);
    Ok(Outcome { value: v, pass })
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn parse_poison(spec: &str) -> Res<(u64, i64)> {
    let (l, d) = match spec.split_once(':') {
        Some((l, d)) => (l, d),
        None => (spec, "1"),
    };
    match (l.trim().parse::<u64>(), d.trim().parse::<i64>()) {
        (Ok(l), Ok(d)) if d != 0 => Ok((l, d)),
        _ => usage(format!("--poison expects l or l:delta with delta != 0, got {spec:?}")),
    }
}

fn form_scenario(ctx: &Ctx, a: &SetupArgs, form: Option<&str>) -> Res<Scenario> {
    let f = pick_form(ctx, form, None, a.p.or(ctx.cfg.setup.p))?;
    let r = resolve_setup(ctx, a, Some(&f))?;
    if r.p != f.p {
        return Err(Error::PrimeMismatch(f.p, r.p).into());
    }
    let setup = validate_setup(r.d, r.p, f.level, r.factorization)?;
    Ok(Scenario { form: f, setup })
}

fn rankin(
    ctx: &Ctx,
    a: &SetupArgs,
    c: &CharArgs,
    form: Option<&str>,
    q_max: u64,
    poison: Option<&str>,
) -> Res<Outcome> {
    let sc = form_scenario(ctx, a, form)?;
    let chi = anticyclo(&sc.setup, c)?;
    let series_form = match poison {
        Some(spec) => {
            let (l, d) = parse_poison(spec)?;
            sc.form.with_eigenvalue(l, sc.form.a(l)? + d)
        }
        None => sc.form.clone(),
    };
    let primes = suite::good_primes(&sc, q_max);
    if primes.is_empty() {
        return usage("no good primes below --q-max");
    }
    let mut reports = Vec::new();
    let mut pass = true;
    for q in primes {
        let rep = rankin_selberg_check_with(&sc.form, &series_form, &chi, q)?;
        pass &= rep.pass;
        reports.push(serde_json::to_value(rep).expect("report"));
    }
    Ok(Outcome {
        value: json!({
            "form": sc.form.label,
            "setup": setup_json(&sc.setup),
            "character": serde_json::to_value(chi.spec()).expect("spec"),
            "poison": poison,
            "primes": reports,
            "pass": pass,
        }),
        pass,
    })
}

fn euler(ctx: &Ctx, a: &SetupArgs, c: &CharArgs, form: Option<&str>, l: u64) -> Res<Outcome> {
    if !is_prime(l) {
        return usage(format!("--l must be prime, got {l}"));
    }
    let pol = ctx.policy(PrecisionPolicy::default())?;
    let sc = form_scenario(ctx, a, form)?;
    let chi = anticyclo(&sc.setup, c)?;
    let emb = sc.setup.embedding(pol.digits)?;
    let mut places = Vec::new();
    for (v, fdeg) in places_above(&chi, l) {
        let el = euler_element(&sc.form, &v, None, &emb)?;
        places.push(json!({
            "place": v.to_string(),
            "norm": s(el.nv),
            "residue_degree": fdeg,
            "s1": s(&el.s1),
            "s2": s(&el.s2),
            "exponent": s(el.x.residue()),
            "series": el.series(pol.series_terms)?.to_strings(),
            "value_scaled": cyc_json(&el.eval_scaled(&chi)?),
        }));
    }
    // the exact identity holds for the trivial and wild characters
    let cross = if chi.n() == 0 || chi.eps().is_wild() {
        Some(cross_path_check(&sc.form, &chi, l)?)
    } else {
        None
    };
    let pass = cross.as_ref().map_or(true, |r| r.pass);
    Ok(Outcome {
        value: json!({
            "form": sc.form.label,
            "setup": setup_json(&sc.setup),
            "character": serde_json::to_value(chi.spec()).expect("spec"),
            "l": s(l),
            "precision": {"N": pol.digits, "M": pol.series_terms},
            "places": places,
            "cross_path": cross.map(|r| r.pass),
            "pass": pass,
        }),
        pass,
    })
}

// ---- power series input ----

fn big_of(v: &Value) -> Res<BigInt> {
    let txt = match v {
        Value::String(t) => t.trim().to_string(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        _ => return usage(format!("coefficient {v} is not an integer")),
    };
    match txt.parse::<BigInt>() {
        Ok(b) => Ok(b),
        Err(_) => usage(format!("coefficient {txt:?} is not an integer")),
    }
}

struct SeriesData {
    p: u64,
    digits: Option<u32>,
    coeffs: Option<Vec<BigInt>>,
    rows: Option<Vec<Vec<BigInt>>>,
}

fn read_series(inp: &SeriesInput) -> Res<SeriesData> {
    let mut data = SeriesData {
        p: 0,
        digits: None,
        coeffs: None,
        rows: None,
    };
    let mut p = inp.p;
    if let Some(path) = &inp.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        if let Some(x) = v.get("p") {
            p = p.or(x.as_u64().or_else(|| x.as_str().and_then(|t| t.parse().ok())));
        }
        data.digits = v.get("digits").and_then(Value::as_u64).map(|d| d as u32);
        if let Some(Value::Array(cs)) = v.get("coeffs") {
            data.coeffs = Some(cs.iter().map(big_of).collect::<Res<_>>()?);
        }
        if let Some(Value::Array(rs)) = v.get("rows") {
            let mut rows = Vec::new();
            for r in rs {
                let Value::Array(cs) = r else {
                    return usage("rows must be arrays of coefficients");
                };
                rows.push(cs.iter().map(big_of).collect::<Res<_>>()?);
            }
            data.rows = Some(rows);
        }
    }
    if let Some(cs) = &inp.coeffs {
        let parsed = cs
            .iter()
            .map(|t| big_of(&Value::String(t.clone())))
            .collect::<Res<_>>()?;
        data.coeffs = Some(parsed);
    }
    data.p = match p {
        Some(p) => p,
        None => return usage("the prime is missing: pass --p or put \"p\" in the input"),
    };
    Ok(data)
}

fn one_var(ctx: &Ctx, inp: &SeriesInput) -> Res<(PowerSeries1, PrecisionPolicy)> {
    let data = read_series(inp)?;
    let Some(cs) = data.coeffs else {
        return usage("no coefficients: pass --coeffs or an input file with \"coeffs\"");
    };
    if cs.is_empty() {
        return usage("empty coefficient list");
    }
    let mut pol = ctx.policy(PrecisionPolicy::default())?;
    if let Some(d) = data.digits {
        pol.digits = d;
    }
    pol.validate()?;
    let ring = Zp::new(data.p, pol.digits)?;
    let m = pol.series_terms.max(cs.len());
    Ok((PowerSeries1::from_coeffs(&ring, m, cs), pol))
}

fn wprep_cmd(ctx: &Ctx, inp: &SeriesInput) -> Res<Outcome> {
    let (f, _) = one_var(ctx, inp)?;
    let w = wprep(&f)?;
    Ok(Outcome {
        value: json!({
            "mu": w.mu,
            "lambda": w.lambda,
            "g": w.g.to_strings(),
            "precision": w.g.prec(),
            "unit": w.unit.to_strings(),
        }),
        pass: true,
    })
}

fn invariants(ctx: &Ctx, inp: &SeriesInput) -> Res<Outcome> {
    let (f, pol) = one_var(ctx, inp)?;
    let (mu, lambda) = mu_lambda(&f)?;
    Ok(Outcome {
        value: json!({
            "mu": mu,
            "lambda": lambda,
            "p": s(f.p()),
            "precision": {"N": pol.digits, "M": f.terms()},
        }),
        pass: true,
    })
}

fn twist_cmd(ctx: &Ctx, inp: &SeriesInput, eta: &str) -> Res<Outcome> {
    let (f, _) = one_var(ctx, inp)?;
    let Ok(e) = eta.trim().parse::<BigInt>() else {
        return usage(format!("--eta must be an integer, got {eta:?}"));
    };
    let tw = twist(&f, &f.ring().elem(e))?;
    Ok(Outcome {
        value: json!({
            "eta": s(eta.trim()),
            "coeffs": tw.to_strings(),
            "digits": tw.to_digit_strings(),
        }),
        pass: true,
    })
}

fn specialize(ctx: &Ctx, inp: &SeriesInput, k: u32, zeta_n: u32, zeta_exp: i64, separate: bool) -> Res<Outcome> {
    let data = read_series(inp)?;
    let Some(rows) = data.rows else {
        return usage("specialize needs an input file with \"rows\" (coefficients of W^i T^j)");
    };
    if rows.is_empty() || rows.iter().all(Vec::is_empty) {
        return usage("empty two-variable series");
    }
    let mut pol = ctx.policy(PrecisionPolicy::default())?;
    if let Some(d) = data.digits {
        pol.digits = d;
    }
    pol.validate()?;
    let ring = Zp::new(data.p, pol.digits)?;
    let mt = rows.iter().map(Vec::len).max().unwrap_or(0).max(1);
    let series: Vec<PowerSeries1> = rows
        .into_iter()
        .map(|r| PowerSeries1::from_coeffs(&ring, mt, r))
        .collect();
    let f = PowerSeries2::from_rows(&series);
    if separate {
        let sep = specialization_separates(&f)?;
        return Ok(Outcome {
            value: json!({
                "zero": sep.zero,
                "witness": sep.witness,
                "points": sep.points,
                "working_precision": sep.working_precision,
            }),
            pass: true,
        });
    }
    let v = specialize_arith(&f, k, zeta_n, zeta_exp)?;
    let coeffs: Vec<Value> = v
        .c
        .iter()
        .map(|x| Value::Array(x.coeffs().iter().map(s).collect()))
        .collect();
    Ok(Outcome {
        value: json!({
            "k": k,
            "zeta_n": zeta_n,
            "zeta_exp": s(zeta_exp),
            "coeffs": coeffs,
        }),
        pass: true,
    })
}

#[allow(clippy::too_many_arguments)]
fn compare_cmd(
    ctx: &Ctx,
    pair: &str,
    k: Option<u32>,
    p: Option<u64>,
    disc: Option<i64>,
    n_max: Option<u32>,
    chars: Option<&[String]>,
    form: Option<&str>,
) -> Res<Outcome> {
    let pair: Pair = match pair.parse() {
        Ok(x) => x,
        Err(e) => return usage(format!("{e}")),
    };
    let k = k.or(match pair {
        Pair::SuCh => Some(2),
        _ => Some(4),
    });
    let p = p.or(ctx.cfg.setup.p);
    let f = pick_form(ctx, form, k, p)?;
    if k.is_some_and(|k| k != f.k) {
        return usage(format!("form {} has weight {}, not {}", f.label, f.k, k.unwrap_or(0)));
    }
    let d = match disc.or(ctx.cfg.setup.d) {
        Some(d) => d,
        None => match suite::standard_scenarios()?
            .into_iter()
            .find(|sc| sc.form.label == f.label)
        {
            Some(sc) => sc.setup.d,
            None => return usage("missing --disc"),
        },
    };
    let args = SetupArgs {
        disc: Some(d),
        p: Some(f.p),
        ..Default::default()
    };
    let r = resolve_setup(ctx, &args, Some(&f))?;
    let setup = validate_setup(r.d, f.p, f.level, r.factorization)?;
    let list = chars.map(<[String]>::to_vec).or(ctx.cfg.grid.chars.clone());
    let grid = match list {
        Some(items) => parse_char_list(&setup, &items)?,
        None => {
            let n_max = n_max.or(ctx.cfg.grid.n_max).unwrap_or(GRID_N_MAX);
            if n_max == 0 {
                return usage("--n-max must be at least 1");
            }
            default_grid(&setup, n_max)?
        }
    };
    let pol = ctx.policy(GRID_PRECISION)?;
    let rep = compare(pair, &f, &grid, pol.digits)?;
    let pass = rep.pass();
    let mut v = rep.to_json();
    v["form"] = json!(f.label);
    v["setup"] = setup_json(&setup);
    v["pass"] = json!(pass);
    Ok(Outcome { value: v, pass })
}

fn property_json(r: &PropertyResult) -> Value {
    json!({
        "name": r.name,
        "checked": r.checked,
        "failed": r.failed,
        "pass": r.pass(),
        "counterexample": r.counterexample,
    })
}

fn grid(ctx: &Ctx, n_max: Option<u32>, samples: Option<usize>, seed: Option<u64>, poison: Option<u64>) -> Res<Outcome> {
    let g = &ctx.cfg.grid;
    let n_max = n_max.or(g.n_max).unwrap_or(GRID_N_MAX);
    let samples = samples.or(g.samples).unwrap_or(GRID_SAMPLES);
    let seed = seed.or(g.seed).unwrap_or(0);
    if n_max == 0 {
        return usage("empty grid: --n-max must be at least 1");
    }
    if samples == 0 {
        return usage("empty grid: --samples must be at least 1");
    }
    let pol = ctx.policy(GRID_PRECISION)?;
    let scen = suite::standard_scenarios()?;
    if let Some(l) = poison {
        if !scen.iter().all(|sc| sc.form.a(l).is_ok()) {
            return usage(format!("--poison {l}: not a tabulated prime"));
        }
    }
    let ds = [-4, -11];
    let ps = [5, 13];
    let ns = [1, 2];
    let mut props = vec![
        suite::gauss_grid(&ds, &ps, &ns)?,
        suite::martinet_grid(&ds, &ps, &ns)?,
        suite::rankin_grid(&scen, n_max, GRID_RANKIN_BOUND, poison.map(|l| (l, 1)))?,
        suite::rankin_mutation(&scen, n_max, GRID_RANKIN_BOUND)?,
        suite::theta_hecke(&scen, n_max, GRID_THETA_BOUND)?,
        suite::cross_path_grid(&scen, n_max)?,
    ];
    for p in [5u64, 7] {
        for mut r in [
            suite::weierstrass_suite(p, pol, samples, seed)?,
            suite::twist_suite(p, pol, samples, seed)?,
            suite::specialization_diagram(p, pol, samples, seed)?,
            suite::separation_suite(p, pol, samples, seed)?,
        ] {
            r.name = format!("{}/p={p}", r.name);
            props.push(r);
        }
    }
    props.push(suite::compare_suite(&scen, n_max, pol.digits)?);
    let pass = props.iter().all(PropertyResult::pass);
    let first = props
        .iter()
        .find(|r| !r.pass())
        .map(|r| json!({"property": r.name, "counterexample": r.counterexample}));
    Ok(Outcome {
        value: json!({
            "config": {
                "n_max": n_max,
                "samples": samples,
                "seed": s(seed),
                "precision": {"N": pol.digits, "M": pol.series_terms, "MW": pol.weight_terms},
                "poison": poison.map(s),
            },
            "properties": props.iter().map(property_json).collect::<Vec<_>>(),
            "pass": pass,
            "first_counterexample": first,
        }),
        pass,
    })
}
