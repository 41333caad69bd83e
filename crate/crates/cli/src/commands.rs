use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use cloudskel::baselines::{alpha_reeb, mapper, AlphaReebConfig, MapperConfig};
use cloudskel::eval::{betti_number, noise_thresholds, run_benchmark, write_report, write_thresholds, BenchmarkConfig};
use cloudskel::geometry::{load_cloud, CloudFormat, PointCloud};
use cloudskel::hopes::{derived_hopes, hopes_of_cloud, prune_degree_one, reduced_hopes, simplified_hopes, SkeletonGraph};
use cloudskel::persistence::{diagonal_gaps, PersistenceDiagram};
use cloudskel::synth::{generate_dataset, paper_grid, read_manifest, CloudType, DatasetSpec};

use crate::args::{BenchmarkArgs, Command, DiagramArgs, GapsArgs, GenerateArgs, RenderArgs, SkeletonizeArgs};
use crate::meta::{draw_seed, Meta};
use crate::svg;

/// A malformed command line or configuration file.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

macro_rules! usage {
    ($($t:tt)*) => { return Err(Usage(format!($($t)*)).into()) };
}

pub fn run(command: Command) -> Result<()> {
    let config = serde_json::to_value(&command)?;
    let meta = |seed| Meta { command: command.name(), config: config.clone(), seed };
    match &command {
        Command::Generate(a) => generate(a, meta),
        Command::Skeletonize(a) => skeletonize(a, meta),
        Command::Diagram(a) => diagram(a, meta(None)),
        Command::Gaps(a) => gaps(a, meta(None)),
        Command::Benchmark(a) => benchmark(a, meta(None)),
        Command::Render(a) => render(a, meta(None)),
    }
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

/// Pretty JSON to `path`, or to standard output.
fn emit_json(value: &Value, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let mut out = create(p)?;
            serde_json::to_writer_pretty(&mut out, value)?;
            writeln!(out)?;
            out.flush()?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            serde_json::to_writer_pretty(&mut out, value)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut out = create(path)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn read_cloud(path: &Path, format: CloudFormat) -> Result<PointCloud> {
    load_cloud(path, format).with_context(|| format!("reading cloud {}", path.display()))
}

fn generate(a: &GenerateArgs, meta: impl Fn(Option<u64>) -> Meta) -> Result<()> {
    let seed = a.seed.unwrap_or_else(draw_seed);
    let meta = meta(Some(seed));
    if a.clouds == 0 {
        usage!("--clouds must be at least 1");
    }
    if !(a.density > 0.0 && a.density.is_finite()) {
        usage!("--density must be positive, got {}", a.density);
    }
    let types = if a.paper_grid {
        paper_grid()
    } else {
        a.pattern
            .iter()
            .flat_map(|&pattern| a.noise.iter().map(move |&noise| CloudType { pattern, noise }))
            .collect()
    };
    for t in &types {
        cloudskel::synth::make_pattern(t.pattern)?;
    }
    let spec = DatasetSpec { types, clouds_per_type: a.clouds, density: a.density, master_seed: seed };
    let write_files = if a.paper_grid { a.write_files } else { !a.manifest_only };
    let rows = generate_dataset(&spec, &a.out, write_files, &meta.lines())
        .with_context(|| format!("writing dataset to {}", a.out.display()))?;
    println!(
        "{} clouds of {} types; manifest {}{}",
        rows.len(),
        spec.types.len(),
        a.out.join("manifest.csv").display(),
        if write_files { "" } else { " (cloud files not written)" }
    );
    Ok(())
}

enum Algo {
    Hopes,
    Derived(usize, usize),
    Simplified(usize, usize),
    Mapper,
    AlphaReeb,
}

fn parse_algo(words: &[String]) -> Result<Algo> {
    let index = |s: &String| -> Result<usize> {
        match s.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(Usage(format!("expected a positive integer after the algorithm, got `{s}`")).into()),
        }
    };
    let pair = |rest: &[String]| -> Result<(usize, usize)> {
        match rest {
            [] => Ok((1, 1)),
            [k, l] => Ok((index(k)?, index(l)?)),
            _ => Err(Usage("expected two integers K L after the algorithm".into()).into()),
        }
    };
    let (name, rest) = words.split_first().ok_or_else(|| Usage("missing algorithm".into()))?;
    let algo = match name.as_str() {
        "hopes" => Algo::Hopes,
        "hopes-derived" => {
            let (k, l) = pair(rest)?;
            Algo::Derived(k, l)
        }
        "simhopes" => {
            let (k, l) = pair(rest)?;
            Algo::Simplified(k, l)
        }
        "mapper" => Algo::Mapper,
        "alpha-reeb" => Algo::AlphaReeb,
        other => usage!("unknown algorithm `{other}`; expected hopes, hopes-derived, simhopes, mapper or alpha-reeb"),
    };
    if matches!(algo, Algo::Hopes | Algo::Mapper | Algo::AlphaReeb) && !rest.is_empty() {
        usage!("`{name}` takes no positional parameters");
    }
    Ok(algo)
}

fn skeletonize(a: &SkeletonizeArgs, meta: impl Fn(Option<u64>) -> Meta) -> Result<()> {
    let algo = parse_algo(&a.algo)?;
    let seed = if a.random_start { Some(a.seed.unwrap_or_else(draw_seed)) } else { a.seed };
    let meta = meta(seed);
    let cloud = read_cloud(&a.cloud, a.format)?;
    let start = match seed {
        Some(s) if a.random_start && !cloud.is_empty() => Some(ChaCha8Rng::seed_from_u64(s).gen_range(0..cloud.len())),
        _ => None,
    };
    let mut extra = json!({});
    let graph = match algo {
        Algo::Hopes => {
            let (h, _, f) = hopes_of_cloud(&cloud)?;
            extra["filtration"] = json!(f.kind());
            match a.alpha {
                Some(alpha) => reduced_hopes(&h, alpha),
                None => h,
            }
        }
        Algo::Derived(k, l) => {
            let (h, p, f) = hopes_of_cloud(&cloud)?;
            let gd = diagonal_gaps(&p.pd1);
            extra["filtration"] = json!(f.kind());
            extra["vs"] = json!(gd.vs(k, l));
            derived_hopes(&h, &gd, k, l)
        }
        Algo::Simplified(k, l) => {
            let s = simplified_hopes(&cloud, k, l)?;
            extra["epsilon"] = json!(s.epsilon);
            s.simplified
        }
        Algo::Mapper => {
            let (Some(t), Some(eps)) = (a.t, a.eps) else { usage!("mapper needs --t and --eps") };
            let cfg = MapperConfig { t, eps, min_points: a.min_points, overlap: a.overlap, base: start };
            mapper(&cloud, &cfg)?
        }
        Algo::AlphaReeb => {
            let Some(alpha) = a.alpha else { usage!("alpha-reeb needs --alpha") };
            alpha_reeb(&cloud, &AlphaReebConfig { alpha, graph_eps: a.graph_eps, start })?
        }
    };
    let graph = if a.prune { prune_degree_one(&graph) } else { graph };
    extra["betti"] = json!(betti_number(&graph));
    extra["start"] = json!(start);
    let meta_value = meta.with(extra);

    let mut value = serde_json::to_value(&graph)?;
    value["meta"] = meta_value.clone();
    emit_json(&value, a.out.as_deref())?;
    if let Some(path) = &a.svg {
        let points = cloud.points2().context("drawing needs a planar cloud")?;
        write_text(path, &svg::skeleton(&points, &graph, &title(&a.cloud, &a.algo.join(" ")), &meta_value.to_string()))?;
    }
    Ok(())
}

fn title(path: &Path, what: &str) -> String {
    format!("{} ({what})", path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into()))
}

fn diagram(a: &DiagramArgs, meta: Meta) -> Result<()> {
    let cloud = read_cloud(&a.cloud, a.format)?;
    let (_, p, f) = hopes_of_cloud(&cloud)?;
    let meta_value = meta.with(json!({ "filtration": f.kind() }));
    let value = json!({ "meta": meta_value, "pd0": p.pd0, "pd1": p.pd1 });
    emit_json(&value, a.out.as_deref())?;
    if let Some(path) = &a.svg {
        let gd = diagonal_gaps(&p.pd1);
        write_text(path, &svg::diagram(&p.pd1, &gd, &title(&a.cloud, "PD1"), &meta_value.to_string()))?;
    }
    Ok(())
}

/// The one-dimensional diagram inside a JSON file: either a bare diagram or
/// the `pd1` field of `diagram` output.
fn diagram_from_json(path: &Path) -> Result<PersistenceDiagram> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let inner = value.get("pd1").cloned().unwrap_or(value);
    let pd: PersistenceDiagram =
        serde_json::from_value(inner).with_context(|| format!("{} holds no persistence diagram", path.display()))?;
    // normalise hand-written files: sort, merge and drop diagonal dots
    Ok(PersistenceDiagram::from_dots(pd.dimension, pd.dots().iter().copied()))
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn gaps(a: &GapsArgs, meta: Meta) -> Result<()> {
    let pd1 = if is_json(&a.input) {
        diagram_from_json(&a.input)?
    } else {
        hopes_of_cloud(&read_cloud(&a.input, a.format)?)?.1.pd1
    };
    let gd = diagonal_gaps(&pd1);
    let meta_value = meta.json();
    let value = json!({ "meta": meta_value, "dots": pd1.dots(), "gaps": gd.report(a.max_k) });
    emit_json(&value, a.out.as_deref())?;
    if let Some(path) = &a.svg {
        write_text(path, &svg::diagram(&pd1, &gd, &title(&a.input, "gaps"), &meta_value.to_string()))?;
    }
    Ok(())
}

/// Parses flat `key = value` lines; `#` starts a comment line.
fn parse_config(text: &str, origin: &Path) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            usage!("{}:{}: expected `key = value`, got `{line}`", origin.display(), n + 1);
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            usage!("{}:{}: empty key or value", origin.display(), n + 1);
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            usage!("{}:{}: `{key}` is set twice", origin.display(), n + 1);
        }
    }
    Ok(map)
}

fn benchmark(a: &BenchmarkArgs, mut meta: Meta) -> Result<()> {
    let text = fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    let mut map = parse_config(&text, &a.config)?;
    for o in &a.overrides {
        let Some((k, v)) = o.split_once('=') else { usage!("--set expects KEY=VALUE, got `{o}`") };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    let Some(manifest) = map.remove("manifest").map(PathBuf::from) else {
        usage!("{}: missing `manifest` key", a.config.display());
    };
    let out = map.remove("out").map_or_else(|| PathBuf::from("."), PathBuf::from);
    let cfg = BenchmarkConfig::from_map(&map).map_err(|e| Usage(format!("{}: {e}", a.config.display())))?;
    meta.config = json!({ "config": a.config, "manifest": manifest, "out": out, "settings": map });

    let rows = read_manifest(&manifest).with_context(|| format!("reading manifest {}", manifest.display()))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let report = run_benchmark(&rows, base, &cfg);
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let header = meta.lines();
    let mut w = create(&out.join("report.csv"))?;
    write_report(&mut w, &report, &header)?;
    w.flush()?;
    let mut w = create(&out.join("thresholds.csv"))?;
    write_thresholds(&mut w, &noise_thresholds(&report), &header)?;
    w.flush()?;
    emit_json(&json!({ "meta": meta.json(), "outcomes": report.outcomes }), Some(&out.join("outcomes.json")))?;

    let failures: usize = report.rows.iter().map(|r| r.failures).sum();
    println!(
        "{} report rows from {} clouds; {} failed runs; written to {}",
        report.rows.len(),
        rows.len(),
        failures,
        out.display()
    );
    Ok(())
}

fn render(a: &RenderArgs, meta: Meta) -> Result<()> {
    let text = fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", a.input.display()))?;
    let metadata = meta.json().to_string();
    let doc = if value.get("edges").is_some() {
        let g: SkeletonGraph = serde_json::from_value(value).context("reading skeleton")?;
        let points = match &a.cloud {
            Some(p) => read_cloud(p, a.format)?.points2().context("drawing needs a planar cloud")?,
            None => Vec::new(),
        };
        if g.vertices.iter().all(|v| v.position().is_none()) && !g.vertices.is_empty() {
            bail!(cloudskel::Error::NotPlanar("skeleton without vertex positions".into()));
        }
        svg::skeleton(&points, &g, &title(&a.input, "skeleton"), &metadata)
    } else {
        let pd = diagram_from_json(&a.input)?;
        svg::diagram(&pd, &diagonal_gaps(&pd), &title(&a.input, "diagram"), &metadata)
    };
    write_text(&a.out, &doc)
}
