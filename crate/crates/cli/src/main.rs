use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use semicube::base::{cube_base, simplex_base, BaseCategory, BaseKind};
use semicube::checks::{run_check_all, Budget, CheckConfig, Verdict, OUT_OF_MODEL};
use semicube::cube::{compose_cube, enumerate_hom, factor_surj, r_functor, CubeMor, HomMode};
use semicube::day::day_product;
use semicube::dr::{check_direct, zigzag_check, DrCategory, DrJson};
use semicube::generate::{random_fibrant, random_fibration_onto, FrameParams};
use semicube::kan::{lan, ran};
use semicube::nat::{count_nat, nat_set};
use semicube::presheaf::{Presheaf, PresheafJson, PresheafMap};
use semicube::skeleton::skeletal_filtration;
use semicube::tribe::{cone_extend, cotensor_skeletal, gap_map, SetFrame};

#[derive(Parser)]
#[command(name = "semicube", version, about = "Semi-cubes, finite presheaves, D_R and the set tribe")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Degree bound for bases and checks.
    #[arg(long, global = true, alias = "maxdeg")]
    max_degree: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML config with default bounds; `semicube.toml` is read when present.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Cube(CubeCmd),
    #[command(subcommand)]
    Presheaf(PresheafCmd),
    #[command(subcommand)]
    Dr(DrCmd),
    #[command(subcommand)]
    Frame(FrameCmd),
    #[command(subcommand)]
    Check(CheckCmd),
    /// Export a base category as JSON or as an adjacency list.
    Export {
        #[arg(value_enum)]
        entity: Entity,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Entity {
    CubePlain,
    CubeSym,
    Simplex,
    Dr,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Adjacency,
}

#[derive(Subcommand)]
enum CubeCmd {
    /// List Hom(I^from, I^to).
    Hom {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Without symmetries and reversals.
        #[arg(long)]
        plain: bool,
    },
    /// Compose two morphisms, `g ∘ f`, each a label or a JSON file.
    Compose { g: String, f: String },
    /// Factor a morphism as an automorphism after the image of a simplex map.
    Factor { f: String },
}

/// Presheaves are written `rep:OBJ`, `boundary:OBJ`, `terminal`, `empty`,
/// or a path to a JSON file.
#[derive(Subcommand)]
enum PresheafCmd {
    /// The boundary of a representable.
    Boundary {
        object: String,
        #[arg(long, default_value = "cube-plain")]
        base: String,
    },
    /// Skeletal filtration of a presheaf over a direct base.
    Skeleton {
        presheaf: String,
        #[arg(long, default_value = "cube-plain")]
        base: String,
    },
    /// Day convolution of two presheaves.
    Day {
        left: String,
        right: String,
        #[arg(long, default_value = "cube-plain")]
        base: String,
    },
    /// Natural transformations between two presheaves.
    Nat {
        source: String,
        target: String,
        #[arg(long, default_value = "cube-plain")]
        base: String,
        /// Only count.
        #[arg(long)]
        count: bool,
    },
    /// Left Kan extension of a D_R presheaf along p.
    Lan { presheaf: String },
    /// Right Kan extension of a D_R presheaf along p.
    Ran { presheaf: String },
    /// Pull back a presheaf over R along p.
    Restrict { presheaf: String },
}

#[derive(Subcommand)]
enum DrCmd {
    /// Build D_R and print its size, or its JSON with `--json`.
    Build,
    /// Verify laws, conservation and directness of a built or loaded D_R.
    CheckDirect { input: Option<PathBuf> },
    /// Check the zig-zag of natural transformations.
    CheckContractible { input: Option<PathBuf> },
    /// List morphisms between two objects given by label.
    Hom {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FrameCmd {
    /// A seeded random Reedy fibrant frame.
    Random {
        #[arg(long, default_value = "cube-plain")]
        base: String,
        #[arg(long, default_value_t = 3)]
        base_max: usize,
        #[arg(long, default_value_t = 2)]
        pad_max: usize,
    },
    /// Cotensor of a frame by a presheaf, compared with Nat.
    Cotensor {
        frame: String,
        shape: String,
        #[arg(long, default_value = "cube-plain")]
        base: String,
    },
    /// Gap map of `∂J^x -> J^x` against a seeded fibration onto a frame.
    Gap {
        object: String,
        /// Target frame; seeded when absent.
        #[arg(long)]
        frame: Option<String>,
        #[arg(long, default_value = "cube-plain")]
        base: String,
        #[arg(long, default_value_t = 2)]
        pad_max: usize,
    },
    /// Extend a cone from object 0 over a D_R frame.
    Cone {
        /// Frame over D_R; seeded when absent.
        #[arg(long)]
        frame: Option<String>,
        /// Images in F(0) of the points of the cone.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        points: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Run the acceptance suites.
    All {
        /// Comma-separated subset of suites.
        #[arg(long, value_delimiter = ',')]
        suites: Vec<String>,
        /// Record wall-clock durations.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct Config {
    max_degree: Option<usize>,
    seed: Option<u64>,
    timings: Option<bool>,
    budget: Option<Budget>,
}

struct Ctx {
    max_degree: usize,
    seed: u64,
    timings: bool,
    budget: Budget,
    dr: std::sync::OnceLock<DrCategory>,
}

impl Ctx {
    fn new(global: &Global) -> Result<Ctx> {
        let config = match &global.config {
            Some(p) => read_config(p)?,
            None if Path::new("semicube.toml").exists() => read_config(Path::new("semicube.toml"))?,
            None => Config::default(),
        };
        let mut budget = config.budget.unwrap_or_default();
        apply_budget_env(&mut budget)?;
        let max_degree = global.max_degree.or(env("SEMICUBE_MAX_DEGREE")?).or(config.max_degree).unwrap_or(2);
        let seed = global.seed.or(env("SEMICUBE_SEED")?).or(config.seed).unwrap_or(42);
        let timings = env("SEMICUBE_TIMINGS")?.or(config.timings).unwrap_or(false);
        Ok(Ctx { max_degree, seed, timings, budget, dr: Default::default() })
    }

    fn dr(&self) -> Result<&DrCategory> {
        if self.dr.get().is_none() {
            let dr = DrCategory::build(self.max_degree)?;
            let _ = self.dr.set(dr);
        }
        Ok(self.dr.get().expect("set above"))
    }

    fn base(&self, kind: &str) -> Result<Arc<BaseCategory>> {
        Ok(match BaseKind::parse(kind)? {
            BaseKind::CubePlain => cube_base(HomMode::Plain, self.max_degree),
            BaseKind::CubeSym => cube_base(HomMode::Symmetric, self.max_degree),
            BaseKind::Simplex => simplex_base(self.max_degree),
            BaseKind::Dr => self.dr()?.base().clone(),
            BaseKind::Custom => bail!("custom bases cannot be built from the command line"),
        })
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn read_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn env<T: std::str::FromStr>(name: &str) -> Result<Option<T>> {
    match std::env::var(name) {
        Ok(v) => v.parse().map(Some).map_err(|_| anyhow!("{name}: cannot parse `{v}`")),
        Err(_) => Ok(None),
    }
}

/// `SEMICUBE_BUDGET_<FIELD>` overrides one budget field.
fn apply_budget_env(budget: &mut Budget) -> Result<()> {
    let mut value = serde_json::to_value(&*budget)?;
    let fields = value.as_object_mut().expect("budget is a struct");
    for (key, slot) in fields.iter_mut() {
        if let Some(v) = env::<usize>(&format!("SEMICUBE_BUDGET_{}", key.to_uppercase()))? {
            *slot = json!(v);
        }
    }
    *budget = serde_json::from_value(value)?;
    Ok(())
}

fn parse_presheaf(ctx: &Ctx, base: &Arc<BaseCategory>, arg: &str) -> Result<Presheaf> {
    if let Some(label) = arg.strip_prefix("rep:") {
        return Ok(Presheaf::representable(base, base.object_by_label(label)?)?);
    }
    if let Some(label) = arg.strip_prefix("boundary:") {
        return Ok(Presheaf::boundary(base, base.object_by_label(label)?)?.0);
    }
    match arg {
        "terminal" => return Ok(Presheaf::terminal(base.clone())),
        "empty" => return Ok(Presheaf::empty(base.clone())),
        _ => {}
    }
    let text = std::fs::read_to_string(arg).with_context(|| format!("reading presheaf `{arg}`"))?;
    let parsed: PresheafJson = serde_json::from_str(&text).with_context(|| format!("parsing {arg}"))?;
    if parsed.maxdeg != ctx.max_degree {
        bail!("{arg} is over degree {}, run with --max-degree {}", parsed.maxdeg, parsed.maxdeg);
    }
    Ok(Presheaf::from_json(base, &parsed)?)
}

/// A cube morphism from its label or from a JSON file.
fn parse_cube(arg: &str) -> Result<CubeMor> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
        return serde_json::from_str(&text).with_context(|| format!("parsing {arg}"));
    }
    Ok(CubeMor::parse_label(arg)?)
}

fn load_dr(ctx: &Ctx, input: &Option<PathBuf>) -> Result<DrCategory> {
    match input {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let parsed: DrJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
            Ok(DrCategory::from_json(&parsed).with_context(|| format!("loading {}", p.display()))?)
        }
        None => Ok(DrCategory::build(ctx.max_degree)?),
    }
}

/// The label of `x` when `k ≅ J^x`.
fn representing_object(k: &Presheaf) -> Option<String> {
    let base = k.base();
    (0..base.num_objects()).find_map(|x| {
        (0..k.size(x)).find_map(|e| {
            let jx = Presheaf::representable(base, x).ok()?;
            let comps = (0..base.num_objects()).map(|z| base.hom(z, x).iter().map(|&f| k.act(f, e)).collect()).collect();
            PresheafMap::new(jx, k.clone(), comps).ok().filter(PresheafMap::is_iso).map(|_| base.object(x).label.clone())
        })
    })
}

fn sizes_by_label(k: &Presheaf) -> Value {
    let base = k.base();
    let map: serde_json::Map<String, Value> =
        (0..base.num_objects()).filter(|&x| k.size(x) > 0).map(|x| (base.object(x).label.clone(), json!(k.size(x)))).collect();
    Value::Object(map)
}

/// Output of one command: a JSON value and its text rendering.
struct Output {
    json: Value,
    text: String,
    code: u8,
}

impl Output {
    fn ok(json: Value, text: impl Into<String>) -> Output {
        Output { json, text: text.into(), code: 0 }
    }
}

fn run(cli: &Cli, ctx: &Ctx) -> Result<Output> {
    match &cli.command {
        Command::Cube(c) => cube(c),
        Command::Presheaf(c) => presheaf(ctx, c),
        Command::Dr(c) => dr(ctx, c),
        Command::Frame(c) => frame(ctx, c),
        Command::Check(c) => check(ctx, c),
        Command::Export { entity, format } => export(ctx, *entity, *format),
    }
}

fn cube(cmd: &CubeCmd) -> Result<Output> {
    match cmd {
        CubeCmd::Hom { from, to, plain } => {
            let mode = if *plain { HomMode::Plain } else { HomMode::Symmetric };
            let labels: Vec<String> = enumerate_hom(*from, *to, mode).iter().map(CubeMor::label).collect();
            let text = labels.join("\n");
            Ok(Output::ok(json!(labels), text))
        }
        CubeCmd::Compose { g, f } => {
            let h = compose_cube(&parse_cube(g)?, &parse_cube(f)?)?;
            Ok(Output::ok(json!(h.label()), h.label()))
        }
        CubeCmd::Factor { f } => {
            let f = parse_cube(f)?;
            let (w, k) = factor_surj(&f);
            let rk = r_functor(&k);
            let j = json!({ "f": f.label(), "w": w.label(), "k": k.to_string(), "r(k)": rk.label() });
            Ok(Output::ok(j, format!("{} = {} ∘ r({}) = {} ∘ {}", f.label(), w.label(), k, w.label(), rk.label())))
        }
    }
}

fn presheaf(ctx: &Ctx, cmd: &PresheafCmd) -> Result<Output> {
    let emit = |k: &Presheaf| -> Result<Output> {
        let json = serde_json::to_value(k.to_json())?;
        let mut text = format!("sizes {}", sizes_by_label(k));
        if let Some(x) = representing_object(k) {
            text.push_str(&format!("\nrepresented by {x}"));
        }
        Ok(Output::ok(json, text))
    };
    match cmd {
        PresheafCmd::Boundary { object, base } => {
            let b = ctx.base(base)?;
            emit(&Presheaf::boundary(&b, b.object_by_label(object)?)?.0)
        }
        PresheafCmd::Skeleton { presheaf, base } => {
            let b = ctx.base(base)?;
            let k = parse_presheaf(ctx, &b, presheaf)?;
            let dec = skeletal_filtration(&k)?;
            let empty = PresheafMap::new(Presheaf::empty(b.clone()), k.clone(), vec![Vec::new(); b.num_objects()])?;
            let verified = dec.verify(&empty).is_ok();
            let per_degree: Vec<Value> = (0..=b.max_deg())
                .map(|n| {
                    let d = semicube::base::Degree(vec![n as u32]);
                    json!({ "degree": n, "cells": dec.cells_at(&d) })
                })
                .collect();
            let text = format!("{} cells, reconstruction {}", dec.num_cells(), if verified { "verified" } else { "FAILED" });
            Ok(Output {
                json: json!({ "cells": dec.num_cells(), "by_degree": per_degree, "verified": verified }),
                text,
                code: u8::from(!verified),
            })
        }
        PresheafCmd::Day { left, right, base } => {
            let b = ctx.base(base)?;
            let day = day_product(&parse_presheaf(ctx, &b, left)?, &parse_presheaf(ctx, &b, right)?)?;
            let mut out = emit(&day.presheaf)?;
            out.json = json!({
                "presheaf": out.json,
                "represented_by": representing_object(&day.presheaf),
                "warnings": day.warnings,
            });
            Ok(out)
        }
        PresheafCmd::Nat { source, target, base, count } => {
            let b = ctx.base(base)?;
            let (k, l) = (parse_presheaf(ctx, &b, source)?, parse_presheaf(ctx, &b, target)?);
            if *count {
                let n = count_nat(&k, &l)?;
                return Ok(Output::ok(json!({ "count": n }), n.to_string()));
            }
            let maps = nat_set(&k, &l)?;
            let components: Vec<&[Vec<usize>]> = maps.iter().map(PresheafMap::components).collect();
            Ok(Output::ok(json!({ "count": maps.len(), "maps": components }), format!("{} natural maps", maps.len())))
        }
        PresheafCmd::Lan { presheaf } | PresheafCmd::Ran { presheaf } => {
            let dr = ctx.dr()?;
            let p = dr.projection()?;
            let k = parse_presheaf(ctx, dr.base(), presheaf)?;
            let out = match cmd {
                PresheafCmd::Lan { .. } => lan(&p, &k)?.presheaf,
                _ => ran(&p, &k)?.presheaf,
            };
            emit(&out)
        }
        PresheafCmd::Restrict { presheaf } => {
            let dr = ctx.dr()?;
            let k = parse_presheaf(ctx, dr.r_base(), presheaf)?;
            emit(&k.restrict(&dr.projection()?)?)
        }
    }
}

fn dr(ctx: &Ctx, cmd: &DrCmd) -> Result<Output> {
    match cmd {
        DrCmd::Build => {
            let dr = ctx.dr()?;
            let b = dr.base();
            let text = format!("D_R<={}: {} objects, {} morphisms", ctx.max_degree, b.num_objects(), b.num_arrows());
            Ok(Output::ok(serde_json::to_value(dr.to_json())?, text))
        }
        DrCmd::CheckDirect { input } => {
            let dr = load_dr(ctx, input)?;
            let laws = dr.base().validate_laws()?;
            let conservation = dr.conservation_violations();
            let direct = check_direct(&dr);
            let passed = direct.passed() && conservation.is_empty();
            let text = format!(
                "{} objects, {} morphisms, {} composable triples, {} conservation violations, {} degree violations: {}",
                direct.objects,
                direct.morphisms,
                laws.triples,
                conservation.len(),
                direct.violations,
                if passed { "pass" } else { "FAIL" }
            );
            let json = json!({
                "passed": passed, "objects": direct.objects, "morphisms": direct.morphisms,
                "law_triples": laws.triples, "conservation_violations": conservation.len(),
                "degree_violations": direct.violations, "counterexample": direct.counterexample,
            });
            Ok(Output { json, text, code: u8::from(!passed) })
        }
        DrCmd::CheckContractible { input } => {
            let dr = load_dr(ctx, input)?;
            let z = zigzag_check(&dr);
            let text = format!(
                "{} squares, {} failures for id -> d, {} for c -> d: {}",
                z.squares_checked,
                z.eta_failures,
                z.gamma_failures,
                if z.passed() { "pass" } else { "FAIL" }
            );
            Ok(Output { json: serde_json::to_value(&z)?, text, code: u8::from(!z.passed()) })
        }
        DrCmd::Hom { source, target, input } => {
            let dr = load_dr(ctx, input)?;
            let b = dr.base();
            let (x, y) = (b.object_by_label(source)?, b.object_by_label(target)?);
            let labels: Vec<String> = b.hom(x, y).iter().map(|&a| b.arrow(a).label.clone()).collect();
            let text = labels.join("\n");
            Ok(Output::ok(json!(labels), text))
        }
    }
}

fn frame(ctx: &Ctx, cmd: &FrameCmd) -> Result<Output> {
    let mut rng = ctx.rng();
    match cmd {
        FrameCmd::Random { base, base_max, pad_max } => {
            let b = ctx.base(base)?;
            let f = random_fibrant(&b, &mut rng, FrameParams { base_max: *base_max, pad_max: *pad_max })?;
            Ok(Output::ok(serde_json::to_value(f.to_json())?, format!("sizes {}", sizes_by_label(&f))))
        }
        FrameCmd::Cotensor { frame, shape, base } => {
            let b = ctx.base(base)?;
            let f = SetFrame::new(parse_presheaf(ctx, &b, frame)?)?;
            let k = parse_presheaf(ctx, &b, shape)?;
            let c = cotensor_skeletal(&f, &k)?;
            let ok = c.is_bijection();
            let json = json!({ "size": c.size(), "nat_size": c.nat_size, "stage_sizes": c.stage_sizes, "bijection": ok });
            let text = format!("cotensor {} elements, Nat {}, bijection {}", c.size(), c.nat_size, ok);
            Ok(Output { json, text, code: u8::from(!ok) })
        }
        FrameCmd::Gap { object, frame, base, pad_max } => {
            let b = ctx.base(base)?;
            let target = match frame {
                Some(arg) => parse_presheaf(ctx, &b, arg)?,
                None => random_fibrant(&b, &mut rng, FrameParams { base_max: 2, pad_max: 1 })?,
            };
            SetFrame::new(target.clone())?;
            let q = random_fibration_onto(&target, &mut rng, *pad_max)?;
            let (_, i) = Presheaf::boundary(&b, b.object_by_label(object)?)?;
            let g = gap_map(&i, &q)?;
            let text = format!(
                "gap {} -> {}: surjective {}, injective {}",
                g.domain_size, g.codomain_size, g.surjective, g.injective
            );
            Ok(Output { json: serde_json::to_value(&g)?, text, code: u8::from(!g.passed()) })
        }
        FrameCmd::Cone { frame, points } => {
            let dr = ctx.dr()?;
            let f = match frame {
                Some(arg) => parse_presheaf(ctx, dr.base(), arg)?,
                None => random_fibrant(dr.base(), &mut rng, FrameParams { base_max: 3, pad_max: 1 })?,
            };
            let f = SetFrame::new(f)?;
            let c = cone_extend(&f, dr, points.len(), points)?;
            let text = format!(
                "natural {}, restricts {}, comparison maps surjective {}",
                c.natural,
                c.restricts,
                c.stages.iter().all(|s| s.surjective)
            );
            let passed = c.passed();
            Ok(Output { json: serde_json::to_value(&c)?, text, code: u8::from(!passed) })
        }
    }
}

fn check(ctx: &Ctx, cmd: &CheckCmd) -> Result<Output> {
    let CheckCmd::All { suites, timings } = cmd;
    let cfg = CheckConfig {
        max_degree: ctx.max_degree,
        seed: ctx.seed,
        budget: ctx.budget.clone(),
        timings: *timings || ctx.timings,
    };
    let reports = run_check_all(&cfg, suites)?;
    let all_pass = reports.iter().all(|r| r.verdict == Verdict::Pass);
    let header = json!({
        "seed": ctx.seed,
        "max_degree": ctx.max_degree,
        "suites": reports.iter().map(|r| r.suite.as_str()).collect::<Vec<_>>(),
        "out_of_model": OUT_OF_MODEL,
    });
    let mut text = format!("seed {} max-degree {}\nout of model: {}\n", ctx.seed, ctx.max_degree, OUT_OF_MODEL.join("; "));
    let mut stream = vec![json!({ "header": header })];
    for r in &reports {
        let verdict = match r.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Error => "ERROR",
        };
        text.push_str(&format!("{verdict:5} {:16} {}", r.suite, r.summary));
        if let Some(ms) = r.duration_ms {
            text.push_str(&format!(" ({ms} ms)"));
        }
        text.push('\n');
        stream.push(serde_json::to_value(r)?);
    }
    Ok(Output { json: Value::Array(stream), text: text.trim_end().to_string(), code: u8::from(!all_pass) })
}

fn export(ctx: &Ctx, entity: Entity, format: Format) -> Result<Output> {
    let base = match entity {
        Entity::CubePlain => ctx.base("cube-plain")?,
        Entity::CubeSym => ctx.base("cube-sym")?,
        Entity::Simplex => ctx.base("simplex")?,
        Entity::Dr => ctx.base("dr")?,
    };
    let objects: Vec<&str> = base.objects().iter().map(|o| o.label.as_str()).collect();
    let arrows: Vec<Value> = (0..base.num_arrows())
        .filter(|&a| !base.is_identity(a))
        .map(|a| json!({ "label": base.arrow(a).label, "dom": objects[base.dom(a)], "cod": objects[base.cod(a)] }))
        .collect();
    let mut adjacency = String::new();
    for x in 0..base.num_objects() {
        let targets: Vec<String> = base
            .outgoing(x)
            .iter()
            .filter(|&&a| !base.is_identity(a))
            .map(|&a| format!("{}={}", objects[base.cod(a)], base.arrow(a).label))
            .collect();
        adjacency.push_str(&format!("{}\t{}\n", objects[x], targets.join("\t")));
    }
    let json = match format {
        Format::Json => json!({ "name": base.name(), "objects": objects, "arrows": arrows }),
        Format::Adjacency => json!({ "name": base.name(), "adjacency": adjacency }),
    };
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&json)?,
        Format::Adjacency => adjacency.trim_end().to_string(),
    };
    Ok(Output::ok(json, text))
}

/// Renders `out`, writing it to `--out` when given; returns what belongs on stdout.
fn render(global: &Global, out: &Output, stream: bool) -> Result<String> {
    let body = if global.json {
        match (&out.json, stream) {
            (Value::Array(items), true) => {
                items.iter().map(serde_json::to_string).collect::<Result<Vec<_>, _>>()?.join("\n")
            }
            (v, _) => serde_json::to_string_pretty(v)?,
        }
    } else {
        out.text.clone()
    };
    match &global.out {
        Some(path) => {
            std::fs::write(path, body + "\n").with_context(|| format!("writing {}", path.display()))?;
            Ok(String::new())
        }
        None => Ok(body + "\n"),
    }
}

struct Execution {
    code: u8,
    stdout: String,
    stderr: String,
}

fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Execution { code: 2, stdout: String::new(), stderr: text }
            } else {
                Execution { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let result = Ctx::new(&cli.global).and_then(|ctx| {
        let out = run(&cli, &ctx)?;
        Ok((out.code, render(&cli.global, &out, matches!(cli.command, Command::Check(_)))?))
    });
    match result {
        Ok((code, stdout)) => Execution { code, stdout, stderr: String::new() },
        Err(e) => Execution { code: 2, stdout: String::new(), stderr: format!("error: {e:#}\n") },
    }
}

fn main() -> ExitCode {
    let run = execute(std::env::args_os());
    eprint!("{}", run.stderr);
    if let Err(e) = std::io::stdout().lock().write_all(run.stdout.as_bytes()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(run.code)
}

#[cfg(test)]
mod tests;
