use std::fs;
use std::path::Path;

use evograph::figures::{self, FigureTable};
use evograph::format::{
    fmt_sig, parse_family, parse_graph, parse_params, parse_points, params_to_string,
    with_temporal_weight, PointSpec, RunParams,
};
use evograph::sampling::sample_field;
use evograph::temporal::{kt_eval, TemporalKernelSpec};
use evograph::{gram_matrix, pd_check, EquivalentSimpleGraph, Error, GraphPoint, Metric, TimeEvolvingGraph};

use crate::output::{graph_hash, num, Csv};

/// Exit code plus message. Code 2 marks unreadable or malformed input.
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Parse(_)) { 2 } else { 1 };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError {
        code: 2,
        message: format!("{}: {e}", path.display()),
    }
}

fn failure(message: String) -> CliError {
    CliError { code: 1, message }
}

type CliResult = Result<(), CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn load_graph(path: &Path) -> Result<TimeEvolvingGraph, CliError> {
    Ok(parse_graph(&read(path)?)?)
}

struct Loaded {
    teg: TimeEvolvingGraph,
    graph: EquivalentSimpleGraph,
    params: RunParams,
    names: Vec<String>,
    points: Vec<GraphPoint>,
}

fn load(graph: &Path, params: &str, points: &Path) -> Result<Loaded, CliError> {
    let params = parse_params(params)?;
    let mut teg = load_graph(graph)?;
    if let Some(alpha) = params.alpha {
        teg = with_temporal_weight(&teg, alpha);
    }
    let specs = parse_points(&read(points)?)?;
    let graph = teg.build()?;
    let resolved = specs
        .iter()
        .map(|s: &PointSpec| {
            s.resolve(&graph)
                .map_err(|e| failure(format!("point {}: {e}", s.name)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Loaded {
        names: specs.into_iter().map(|s| s.name).collect(),
        points: resolved,
        teg,
        graph,
        params,
    })
}

fn meta(l: &Loaded) -> Vec<(&'static str, String)> {
    vec![
        ("graph_sha256", graph_hash(&l.teg)),
        ("params", params_to_string(&l.params)),
    ]
}

pub fn validate(path: &Path) -> CliResult {
    let teg = load_graph(path)?;
    let report = teg.validate();
    if !report.is_valid() {
        for m in report.messages() {
            println!("{m}");
        }
        return Err(failure(format!(
            "{} problem(s) found in {}",
            report.messages().len(),
            path.display()
        )));
    }
    let g = teg.build()?;
    println!(
        "valid: {:?} graph, m = {}, {} vertices, {} spatial and {} temporal edges, {} component(s)",
        g.time_model(),
        g.m(),
        g.n_vertices(),
        g.spatial_edges().count(),
        g.temporal_edges().count(),
        g.n_components()
    );
    for layer in &report.layers {
        println!("layer {}: {} component(s)", layer.time, layer.components);
    }
    Ok(())
}

fn select_pairs(names: &[String], pairs: Option<&str>) -> Result<Vec<(usize, usize)>, CliError> {
    let Some(spec) = pairs else {
        let n = names.len();
        return Ok((0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect());
    };
    let find = |name: &str| {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| failure(format!("unknown point name {name}")))
    };
    spec.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (a, b) = p.split_once(':').ok_or_else(|| CliError {
                code: 2,
                message: format!("expected name:name, got '{p}'"),
            })?;
            Ok((find(a.trim())?, find(b.trim())?))
        })
        .collect()
}

pub fn distance(
    graph: &Path,
    params: &str,
    points: &Path,
    pairs: Option<&str>,
    out: Option<&Path>,
) -> CliResult {
    let l = load(graph, params, points)?;
    let pairs = select_pairs(&l.names, pairs)?;
    let metric = Metric::new(&l.graph, l.params.metric)?;
    let mut csv = Csv::new(&meta(&l));
    csv.row(&["p1", "p2", "d", "vertex_part", "bridge_part", "wiener_part", "status"]);
    for (i, j) in pairs {
        let (a, b) = (l.names[i].as_str(), l.names[j].as_str());
        match metric.dist(&l.points[i], &l.points[j]) {
            Ok(d) => csv.row(&[
                a,
                b,
                &fmt_sig(d.value, 12),
                &fmt_sig(d.vertex_part, 12),
                &fmt_sig(d.bridge_part, 12),
                &fmt_sig(d.wiener_part, 12),
                "ok",
            ]),
            Err(Error::DifferentComponents) => {
                csv.row(&[a, b, "", "", "", "", "different_components"])
            }
            Err(Error::DegenerateDistance { value, .. }) => {
                csv.row(&[a, b, &fmt_sig(value, 12), "", "", "", "degenerate"])
            }
            Err(e) => return Err(e.into()),
        }
    }
    csv.write(out).map_err(|e| failure(e.to_string()))
}

pub fn gram(graph: &Path, params: &str, family: &str, points: &Path, out: Option<&Path>) -> CliResult {
    let f = parse_family(family)?;
    let l = load(graph, params, points)?;
    let metric = Metric::new(&l.graph, l.params.metric)?;
    let g = gram_matrix(&metric, &f, &l.points)?;
    let mut m = meta(&l);
    m.push(("family", f.to_string()));
    let mut csv = Csv::new(&m);
    let mut header = vec!["point".to_string()];
    header.extend(l.names.iter().cloned());
    csv.row(&header);
    for (i, name) in l.names.iter().enumerate() {
        let mut row = vec![name.clone()];
        row.extend(g.row(i).iter().map(|&x| num(x)));
        csv.row(&row);
    }
    if !l.points.is_empty() {
        let pd = pd_check(&g)?;
        csv.comment(&format!(
            "pd_check: {} min_eigenvalue={} tolerance={}",
            pd.class,
            num(pd.min_eigenvalue),
            num(pd.tolerance)
        ));
    }
    csv.write(out).map_err(|e| failure(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kt {
    Ar1,
    Circulant,
    BlockAr1,
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError {
        code: 2,
        message: format!("this variant needs --{flag}"),
    })
}

pub fn kt(
    variant: Kt,
    lambda: Option<f64>,
    rho: Option<f64>,
    m: Option<usize>,
    lifespan: Option<&str>,
    max_lag: usize,
    out: Option<&Path>,
) -> CliResult {
    let spec = match variant {
        Kt::Ar1 => TemporalKernelSpec::Ar1 {
            lambda: need(lambda, "lambda")?,
        },
        Kt::Circulant => TemporalKernelSpec::Circulant {
            rho: need(rho, "rho")?,
            m: need(m, "m")?,
        },
        Kt::BlockAr1 => {
            let times = need(lifespan, "lifespan")?
                .split(',')
                .map(|s| {
                    s.trim().parse::<usize>().map_err(|_| CliError {
                        code: 2,
                        message: format!("invalid layer '{s}' in --lifespan"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            TemporalKernelSpec::BlockAr1 {
                lambda: need(lambda, "lambda")?,
                lifespan: times,
                m: need(m, "m")?,
            }
        }
    };
    spec.validate()?;
    let mut csv = Csv::new(&[(
        "kernel",
        serde_json::to_string(&spec).expect("spec serialises"),
    )]);
    match &spec {
        TemporalKernelSpec::Ar1 { .. } => {
            csv.row(&["lag", "k"]);
            for h in 0..=max_lag {
                csv.row(&[h.to_string(), num(kt_eval(&spec, 0, h)?)]);
            }
        }
        TemporalKernelSpec::Circulant { m, .. } => {
            csv.row(&["lag", "k"]);
            for h in 0..=*m {
                csv.row(&[h.to_string(), num(kt_eval(&spec, 0, h % m)?)]);
            }
        }
        TemporalKernelSpec::BlockAr1 { lifespan, .. } => {
            csv.row(&["tau1", "tau2", "k"]);
            for &a in lifespan {
                for &b in lifespan {
                    csv.row(&[a.to_string(), b.to_string(), num(kt_eval(&spec, a, b)?)]);
                }
            }
        }
    }
    csv.write(out).map_err(|e| failure(e.to_string()))
}

pub fn sample(
    graph: &Path,
    params: &str,
    points: &Path,
    n: usize,
    seed: u64,
    out: Option<&Path>,
) -> CliResult {
    let l = load(graph, params, points)?;
    let metric = Metric::new(&l.graph, l.params.metric)?;
    let mut m = meta(&l);
    m.push(("seed", seed.to_string()));
    m.push(("draws", n.to_string()));
    let mut csv = Csv::new(&m);
    csv.row(&l.names);
    if n > 0 && !l.points.is_empty() {
        let batch = sample_field(&metric, &l.points, n, seed)?;
        for r in 0..n {
            let row: Vec<String> = batch.draws.row(r).iter().map(|&x| num(x)).collect();
            csv.row(&row);
        }
    }
    csv.write(out).map_err(|e| failure(e.to_string()))
}

fn write_table(t: &FigureTable, dir: &Path) -> Result<(), CliError> {
    let mut csv = Csv::new(&[("table", t.name.clone())]);
    csv.row(&t.columns);
    for r in &t.rows {
        let row: Vec<String> = r.iter().map(|&x| num(x)).collect();
        csv.row(&row);
    }
    let path = dir.join(format!("{}.csv", t.name));
    csv.write(Some(&path)).map_err(|e| failure(format!("{}: {e}", path.display())))?;
    println!("{}", path.display());
    Ok(())
}

pub fn figure(name: &str, out: &Path, dev: bool) -> CliResult {
    if !figures::FIGURES.contains(&name) && !(dev && name == "fig5") {
        return Err(CliError {
            code: 2,
            message: format!(
                "unknown figure {name}; expected one of {}",
                figures::FIGURES.join(", ")
            ),
        });
    }
    fs::create_dir_all(out).map_err(|e| failure(format!("{}: {e}", out.display())))?;
    for t in figures::figure(name)? {
        write_table(&t, out)?;
    }
    Ok(())
}
