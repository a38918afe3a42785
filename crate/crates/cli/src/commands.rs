use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use xlev::experiments::density::run_density_study;
use xlev::experiments::grid::run_combo_grid;
use xlev::experiments::pipeline::{run_pipeline_study, Method, PipelineConfig};
use xlev::experiments::success::{run_success_study, success_summary_tsv, success_tsv};
use xlev::experiments::{comment_header, ExperimentConfig, DESK_REPLICATES, FULL_REPLICATES};
use xlev::io::{load_table, preprocess_report, raster_bytes, RawTable, ResponseColumn};
use xlev::logic::{anneal_fit, ensemble_fit, AnnealParams, Dnf, Literal, LogicTree, Operator};
use xlev::selection::{select_with_scores, CombinedMode, CombinedSpec, SelectionSpec};
use xlev::simgen::{builtin_terms, calibrated_probs, format_terms, generate, parse_terms, ScenarioSpec};
use xlev::{compute_scores, Criterion, Dataset};

use crate::args::*;
use crate::Usage;

type Echo = Vec<(String, String)>;

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

/// Comment header carried by every output file.
fn header(command: &str, echo: &[(String, String)]) -> String {
    let mut pairs = vec![kv("tool", concat!("xlev ", env!("CARGO_PKG_VERSION"))), kv("command", command)];
    pairs.extend_from_slice(echo);
    comment_header(&pairs)
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<()> {
    if path == Path::new("-") {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes)?;
        out.flush()?;
        return Ok(());
    }
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

fn load(input: &InputArgs) -> Result<Dataset> {
    let table = load_table(&input.input, &ResponseColumn::from(input.response.as_str()))
        .with_context(|| format!("cannot load {}", input.input.display()))?;
    table
        .into_dataset()
        .with_context(|| format!("{} is not a complete table", input.input.display()))
}

fn input_echo(input: &InputArgs) -> Echo {
    vec![kv("input", input.input.display()), kv("response", &input.response)]
}

fn fmt_f(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), |v| v.to_string())
}

pub fn scores(a: &ScoresArgs) -> Result<()> {
    let d = load(&a.input)?;
    let s = compute_scores(&d)?;
    let mut echo = input_echo(&a.input);
    echo.extend([
        kv("n", d.n()),
        kv("p", d.p()),
        kv("seed", "none"),
        kv("rank", s.rank),
        kv("rank_deficient", s.rank_deficient),
        kv("response_leverage", s.response_leverage),
    ]);
    let mut out = header("scores", &echo);
    out.push_str("index\tname\tleverage\tcross_leverage\n");
    for j in 0..d.p() {
        writeln!(out, "{}\t{}\t{}\t{}", j + 1, d.name(j), s.leverage[j], s.cross_leverage[j])?;
    }
    write_output(&a.output.output, out.as_bytes())
}

fn selection_spec(a: &SelectArgs, n: usize) -> Result<(SelectionSpec, Echo)> {
    let criterion = Criterion::from(a.criterion);
    let k = a.k.resolve(n)?;
    let mut echo = vec![kv("criterion", criterion), kv("k", k)];
    let mut spec = if criterion == Criterion::Combined {
        let (Some(pct_cls), Some(pct_ls)) = (a.pct_cls, a.pct_ls) else {
            return Err(Usage("--criterion combined needs --pct-cls and --pct-ls".into()).into());
        };
        let mode = match a.combined_mode {
            CombinedModeArg::Union => {
                if a.total.is_some() {
                    return Err(Usage("--total applies only to --combined-mode sequential".into()).into());
                }
                CombinedMode::Union
            }
            CombinedModeArg::Sequential => CombinedMode::SequentialDisjoint {
                total: a.total.unwrap_or(k),
            },
        };
        echo.extend([kv("pct_cls", pct_cls), kv("pct_ls", pct_ls)]);
        match mode {
            CombinedMode::Union => echo.push(kv("combined_mode", "union")),
            CombinedMode::SequentialDisjoint { total } => {
                echo.extend([kv("combined_mode", "sequential"), kv("total", total)]);
            }
        }
        SelectionSpec::combined(CombinedSpec { pct_cls, pct_ls, mode })
    } else {
        if a.pct_cls.is_some() || a.pct_ls.is_some() || a.total.is_some() {
            return Err(Usage("--pct-cls, --pct-ls and --total need --criterion combined".into()).into());
        }
        SelectionSpec::new(criterion, k)
    };
    spec.cls_mode = a.cls_mode.into();
    spec.ls_mode = a.ls_order.into();
    spec.cor_mode = a.cor_mode.into();
    echo.extend([
        kv("cls_mode", format!("{:?}", a.cls_mode).to_lowercase()),
        kv("ls_order", format!("{:?}", a.ls_order).to_lowercase()),
        kv("cor_mode", format!("{:?}", a.cor_mode).to_lowercase()),
        kv("seed", "none"),
    ]);
    Ok((spec, echo))
}

pub fn select(a: &SelectArgs) -> Result<()> {
    let d = load(&a.input)?;
    let (spec, sel_echo) = selection_spec(a, d.n())?;
    let scores = compute_scores(&d)?;
    let r = select_with_scores(&d, Some(&scores), &spec)?;
    let mut echo = input_echo(&a.input);
    echo.extend([kv("n", d.n()), kv("p", d.p())]);
    echo.extend(sel_echo);
    echo.push(kv("selected", r.indices.len()));
    echo.push(kv("truncated", r.truncated));
    let mut out = header("select", &echo);
    out.push_str("rank\tindex\tname\tscore\n");
    for (rank, (&j, v)) in r.indices.iter().zip(&r.scores_used).enumerate() {
        writeln!(out, "{}\t{}\t{}\t{}", rank + 1, j + 1, d.name(j), fmt_f(*v))?;
    }
    write_output(&a.output.output, out.as_bytes())
}

fn scenario_spec(s: &ScenarioArgs, seed: u64) -> Result<(ScenarioSpec, Echo)> {
    let calibration: xlev::Calibration = s.calibration.into();
    let terms = match &s.terms {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            parse_terms(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => builtin_terms(s.scenario)?,
    };
    let spec = ScenarioSpec {
        n: s.n,
        p: s.p,
        probs: calibrated_probs(&terms, s.p, s.prevalence, calibration)?,
        terms,
        seed,
        flip_prob: s.flip_prob,
    };
    spec.validate()?;
    let terms = format_terms(&spec.terms).trim_end().replace('\n', " | ");
    let scenario = s.terms.as_ref().map_or_else(|| s.scenario.to_string(), |p| p.display().to_string());
    let echo = vec![
        kv("scenario", scenario),
        kv("terms", terms),
        kv("n", s.n),
        kv("p", s.p),
        kv("calibration", calibration),
        kv("prevalence", s.prevalence),
        kv("flip_prob", s.flip_prob),
        kv("seed", seed),
    ];
    Ok((spec, echo))
}

fn table_csv(d: &Dataset, response_name: &str) -> String {
    let mut out = String::new();
    let names: Vec<String> = (0..d.p()).map(|j| d.name(j)).collect();
    out.push_str(&names.join(","));
    out.push(',');
    out.push_str(response_name);
    out.push('\n');
    for i in 0..d.n() {
        for j in 0..d.p() {
            out.push(char::from(b'0' + d.value(i, j)));
            out.push(',');
        }
        out.push(char::from(b'0' + d.y()[i]));
        out.push('\n');
    }
    out
}

pub fn simulate(a: &SimulateArgs) -> Result<()> {
    let (spec, echo) = scenario_spec(&a.scenario, a.seed)?;
    let d = generate(&spec)?;
    let mut out = header("simulate", &echo);
    out.push_str(&table_csv(&d, "y"));
    write_output(&a.output.output, out.as_bytes())
}

fn anneal_params(a: &AnnealArgs, seed: u64) -> AnnealParams {
    AnnealParams {
        nleaves_max: a.nleaves_max,
        iterations: a.iterations,
        t_start: a.t_start,
        cooling: a.cooling,
        seed,
    }
}

fn anneal_echo(p: &AnnealParams) -> Echo {
    vec![
        kv("nleaves_max", p.nleaves_max),
        kv("iterations", p.iterations),
        kv("t_start", p.t_start.map_or_else(|| "auto".into(), |t| t.to_string())),
        kv("cooling", p.cooling),
    ]
}

fn fmt_literal(l: Literal, d: &Dataset) -> String {
    if l.negated {
        format!("!{}", d.name(l.var))
    } else {
        d.name(l.var)
    }
}

fn fmt_tree(t: &LogicTree, d: &Dataset) -> String {
    match t {
        LogicTree::Leaf(l) => fmt_literal(*l, d),
        LogicTree::Node { op, left, right } => {
            let sym = if *op == Operator::And { "&" } else { "|" };
            format!("({} {sym} {})", fmt_tree(left, d), fmt_tree(right, d))
        }
    }
}

fn fmt_term(term: &[Literal], d: &Dataset) -> String {
    term.iter().map(|&l| fmt_literal(l, d)).collect::<Vec<_>>().join("&")
}

fn fmt_dnf(f: &Dnf, d: &Dataset) -> String {
    if f.is_false() {
        return "FALSE".into();
    }
    f.terms().iter().map(|t| fmt_term(t, d)).collect::<Vec<_>>().join("|")
}

/// Optional reduction shared by `fit-logic` and `raster`.
fn reduce(d: &Dataset, criterion: Option<SingleArg>, k: KArg) -> Result<(Vec<usize>, Echo)> {
    let Some(c) = criterion else {
        return Ok(((0..d.p()).collect(), vec![kv("reduce", "none")]));
    };
    let c = Criterion::from(c);
    let k = k.resolve(d.n())?;
    let kept = Method::Single(c).reduce(d, k)?;
    Ok((kept, vec![kv("reduce", c), kv("k", k)]))
}

pub fn fit_logic(a: &FitLogicArgs) -> Result<()> {
    let full = load(&a.input)?;
    let (kept, reduce_echo) = reduce(&full, a.reduce, a.k)?;
    let d = full.select_columns(&kept)?;
    let params = anneal_params(&a.anneal, a.seed);
    let mut echo = input_echo(&a.input);
    echo.extend([kv("n", full.n()), kv("p", full.p())]);
    echo.extend(reduce_echo);
    echo.extend(anneal_echo(&params));
    echo.extend([kv("bootstraps", a.bootstraps), kv("seed", a.seed)]);
    let mut out = header("fit-logic", &echo);
    if a.bootstraps <= 1 {
        let m = anneal_fit(&d, &params)?;
        out.push_str("field\tvalue\n");
        writeln!(out, "score\t{}", m.score)?;
        writeln!(out, "leaves\t{}", m.tree.n_leaves())?;
        writeln!(out, "predict_when_true\t{}", m.predicted_when_true)?;
        writeln!(out, "predict_when_false\t{}", m.predicted_when_false)?;
        writeln!(out, "tree\t{}", fmt_tree(&m.tree, &d))?;
        let dnf = m.case_dnf().map_or_else(|| "NA".into(), |f| fmt_dnf(&f, &d));
        writeln!(out, "case_dnf\t{dnf}")?;
    } else {
        let r = ensemble_fit(&d, &params, a.bootstraps)?;
        out.push_str("kind\titem\tfrequency\n");
        let mut vars: Vec<(usize, f64)> = r.variable_frequency.iter().copied().enumerate().filter(|(_, f)| *f > 0.0).collect();
        vars.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        for (j, f) in vars {
            writeln!(out, "variable\t{}\t{f}", d.name(j))?;
        }
        for (t, f) in &r.term_frequency {
            writeln!(out, "term\t{}\t{f}", fmt_term(t, &d))?;
        }
    }
    write_output(&a.output.output, out.as_bytes())
}

pub fn raster(a: &RasterArgs) -> Result<()> {
    let d = load(&a.input)?;
    let (cols, sel_echo) = if a.columns.is_empty() {
        if a.reduce.is_none() {
            return Err(Usage("raster needs --columns or --reduce".into()).into());
        }
        reduce(&d, a.reduce, a.k)?
    } else {
        if let Some(&bad) = a.columns.iter().find(|&&c| c == 0 || c > d.p()) {
            return Err(Usage(format!("column {bad} outside 1..={}", d.p())).into());
        }
        let cols: Vec<usize> = a.columns.iter().map(|c| c - 1).collect();
        let list: Vec<String> = a.columns.iter().map(ToString::to_string).collect();
        (cols, vec![kv("columns", list.join(","))])
    };
    let mut echo = input_echo(&a.input);
    echo.extend(sel_echo);
    echo.push(kv("seed", "none"));
    let body = raster_bytes(&d, &cols)?;
    // Netpbm allows comment lines right after the magic number.
    let mut bytes = b"P6\n".to_vec();
    bytes.extend_from_slice(header("raster", &echo).as_bytes());
    bytes.extend_from_slice(&body[3..]);
    write_output(&a.output, &bytes)
}

fn raw_csv(t: &RawTable) -> String {
    let mut out = t.names().join(",");
    out.push(',');
    out.push_str(t.response_name());
    out.push('\n');
    for i in 0..t.n() {
        for j in 0..t.p() {
            match t.column(j)[i] {
                Some(v) => out.push(char::from(b'0' + v)),
                None => out.push_str("NA"),
            }
            out.push(',');
        }
        out.push(char::from(b'0' + t.response()[i]));
        out.push('\n');
    }
    out
}

pub fn preprocess(a: &PreprocessArgs) -> Result<()> {
    let table = load_table(&a.input.input, &ResponseColumn::from(a.input.response.as_str()))
        .with_context(|| format!("cannot load {}", a.input.input.display()))?;
    let (kept, dropped) = table.drop_uninformative(a.zero_variance);
    let (clean, report) = kept.impute(a.seed)?;
    let mut echo = input_echo(&a.input);
    echo.extend([
        kv("zero_variance", a.zero_variance),
        kv("seed", a.seed),
        kv("columns_in", table.p()),
        kv("columns_out", clean.p()),
        kv("imputed_cells", report.imputed.iter().sum::<usize>()),
    ]);
    let head = header("preprocess", &echo);
    // The report indexes imputation counts by original column.
    let mut full_counts = vec![0; table.p()];
    let kept_idx: Vec<usize> = (0..table.p()).filter(|j| !dropped.contains(j)).collect();
    for (&j, &c) in kept_idx.iter().zip(&report.imputed) {
        full_counts[j] = c;
    }
    let full_report = xlev::io::ImputeReport {
        imputed: full_counts,
        seed: report.seed,
    };
    write_output(&a.output, format!("{head}{}", raw_csv(&clean)).as_bytes())?;
    if let Some(path) = &a.report {
        write_output(path, format!("{head}{}", preprocess_report(&table, &dropped, &full_report)).as_bytes())?;
    }
    Ok(())
}

fn study_config(s: &StudyArgs) -> (ExperimentConfig, Echo) {
    let replicates = if s.full_scale {
        FULL_REPLICATES
    } else {
        s.replicates.unwrap_or(DESK_REPLICATES)
    };
    let config = ExperimentConfig {
        scenario: s.scenario,
        n: s.n,
        p: s.p,
        replicates,
        k: s.k.as_option(),
        criteria: s.criteria.iter().map(|&c| c.into()).collect(),
        seed: s.seed,
        calibration: s.calibration.into(),
    };
    let mut echo = config.echo();
    echo.push(kv("full_scale", s.full_scale));
    (config, echo)
}

fn write_study(dir: &Path, name: &str, command: &str, echo: &[(String, String)], body: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(name);
    write_output(&path, format!("{}{body}", header(command, echo)).as_bytes())?;
    Ok(path)
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

pub fn experiment(study: &Study) -> Result<()> {
    match study {
        Study::Density(a) => {
            let (cfg, mut echo) = study_config(&a.study);
            echo.push(kv("points", a.points));
            let s = run_density_study(&cfg)?;
            let cmd = "experiment density";
            let dir = &a.study.out_dir;
            let mut written = vec![
                write_study(dir, "density_summary.tsv", cmd, &echo, &s.summary_tsv())?,
                write_study(dir, "density_curves.tsv", cmd, &echo, &s.curves_tsv(a.points)?)?,
            ];
            if a.samples {
                written.push(write_study(dir, "density_samples.tsv", cmd, &echo, &s.samples_tsv())?);
            }
            report_written(&written);
        }
        Study::Success(a) => {
            let (cfg, echo) = study_config(a);
            let h = run_success_study(&cfg)?;
            let cmd = "experiment success";
            report_written(&[
                write_study(&a.out_dir, "success_counts.tsv", cmd, &echo, &success_tsv(&h))?,
                write_study(&a.out_dir, "success_summary.tsv", cmd, &echo, &success_summary_tsv(&h))?,
            ]);
        }
        Study::Grid(a) => {
            let (cfg, echo) = study_config(a);
            let g = run_combo_grid(&cfg)?;
            report_written(&[write_study(&a.out_dir, "grid.tsv", "experiment grid", &echo, &g.to_tsv())?]);
        }
        Study::Pipeline(a) => {
            let (base, _) = study_config(&a.study);
            let mut cfg = PipelineConfig::new(base)?;
            let k = cfg.base.validate_k()?;
            cfg.methods.retain(|m| !matches!(m, Method::Combined { .. }));
            cfg.methods.push(Method::Combined {
                ls: a.combined_ls.min(k),
                total: k,
            });
            cfg.anneal = anneal_params(&a.anneal, a.anneal_seed);
            cfg.bootstraps = a.bootstraps;
            let mut echo = cfg.echo();
            echo.push(kv("full_scale", a.study.full_scale));
            let r = run_pipeline_study(&cfg)?;
            let cmd = "experiment pipeline";
            let dir = &a.study.out_dir;
            let mut timing_echo = echo.clone();
            timing_echo.push(kv("note", "wall-clock seconds; not reproducible"));
            report_written(&[
                write_study(dir, "pipeline_rows.tsv", cmd, &echo, &r.rows_tsv())?,
                write_study(dir, "pipeline_summary.tsv", cmd, &echo, &r.summary_tsv())?,
                write_study(dir, "pipeline_timing.tsv", cmd, &timing_echo, &r.timing_tsv())?,
            ]);
        }
    }
    Ok(())
}
