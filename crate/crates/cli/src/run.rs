//! The `run` pipeline and its output files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rbrdo::optimize::{write_history, GenerationRecord};
use rbrdo::problems::ProblemId;
use rbrdo::rbrdo::level_seed;
use rbrdo::stats::{fit_report, FitReport};
use rbrdo::{de_minimize, sweep_robustness, RbdoEvaluator, RbrdoProblem};

use crate::config::{Mode, RunConfig, RUN_INFO_TABLE};
use crate::error::{CliError, CliResult};

/// Result of one δ level.
struct LevelOutcome {
    level: f64,
    rows: Vec<Vec<f64>>,
    history: Vec<GenerationRecord<f64>>,
}

pub fn front_path(prefix: &Path, level: f64) -> PathBuf {
    suffixed(prefix, &format!("-delta{level}.csv"))
}

pub fn history_path(prefix: &Path, level: f64) -> PathBuf {
    suffixed(prefix, &format!("-delta{level}-history.csv"))
}

pub fn stats_path(prefix: &Path) -> PathBuf {
    suffixed(prefix, "-stats.csv")
}

pub fn meta_path(prefix: &Path) -> PathBuf {
    suffixed(prefix, ".meta.toml")
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn base_problem(cfg: &RunConfig, id: ProblemId) -> CliResult<RbrdoProblem<f64>> {
    let p = id.rbrdo(&cfg.problem_options()?)?;
    let n = p.design_bounds().dim();
    Ok(p
        .with_asosl(cfg.asosl_params())?
        .with_psi(cfg.psi)?
        .with_placement(cfg.placement())
        .with_robustness(cfg.robustness_spec(n)?)?)
}

fn header(problem: &RbrdoProblem<f64>, mode: Mode) -> Vec<String> {
    let n = problem.design_bounds().dim();
    let mut h: Vec<String> = (1..=n).map(|i| format!("d{i}")).collect();
    if mode != Mode::Deterministic {
        h.push("beta".into());
    }
    h.extend(problem.names().iter().cloned());
    h.push("delta_level".into());
    h
}

fn deterministic(cfg: &RunConfig, id: ProblemId) -> CliResult<LevelOutcome> {
    let problem = id.deterministic(&cfg.problem_options()?).with_psi(cfg.psi)?;
    let res = de_minimize(&problem, &cfg.de_params()?)?;
    let x = res.best.decision.as_slice();
    if !res.best.feasible() {
        log::warn!("best design violates the constraints by {}", res.best.constraint_violation);
    }
    let mut row = x.to_vec();
    row.push(problem.objective(x));
    row.push(0.0);
    Ok(LevelOutcome {
        level: 0.0,
        rows: vec![row],
        history: res.history,
    })
}

fn rbdo(cfg: &RunConfig, base: &RbrdoProblem<f64>, level: f64, beta: f64) -> CliResult<LevelOutcome> {
    let eval = RbdoEvaluator::new(base.clone().with_delta_level(level)?, beta)?;
    let mut de = cfg.de_params()?;
    de.seed = level_seed(de.seed, level);
    let res = de_minimize(&eval, &de)?;
    if !res.best.feasible() {
        log::warn!("delta={level}: best design is infeasible (violation {})", res.best.constraint_violation);
    }
    let mut row = res.best.decision.as_slice().to_vec();
    row.push(beta);
    row.extend(&res.best.objectives);
    row.push(level);
    Ok(LevelOutcome {
        level,
        rows: vec![row],
        history: res.history,
    })
}

fn rbrdo_levels(cfg: &RunConfig, base: &RbrdoProblem<f64>) -> CliResult<Vec<CliResult<LevelOutcome>>> {
    let params = cfg.mode_params()?;
    let n_obj = base.senses().len();
    Ok(sweep_robustness(base, &cfg.delta, &params)
        .into_iter()
        .map(|(level, res)| {
            let res = res.map_err(|e| CliError::from(e).context(&format!("delta={level}")))?;
            let mut members = res.archive.into_members();
            members.sort_by(|a, b| {
                let (da, db) = (a.decision.as_slice(), b.decision.as_slice());
                da[da.len() - 1].total_cmp(&db[db.len() - 1])
            });
            let rows = members
                .into_iter()
                .map(|m| {
                    let mut row = m.decision.into_inner();
                    row.extend(&m.objectives[..n_obj]);
                    row.push(level);
                    row
                })
                .collect();
            Ok(LevelOutcome {
                level,
                rows,
                history: res.history,
            })
        })
        .collect())
}

fn write_front(path: &Path, header: &[String], rows: &[Vec<f64>]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let io = |e: csv::Error| CliError::io(path, e);
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r.iter().map(|v| v.to_string())).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn write_stats(path: &Path, fits: &[(f64, FitReport)]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let io = |e: csv::Error| CliError::io(path, e);
    w.write_record(["delta_level", "n", "a0", "a1", "a2", "sqr", "r2", "r2_adj", "rms"])
        .map_err(io)?;
    for (level, r) in fits {
        let [a0, a1, a2] = r.coefficients;
        let mut rec = vec![level.to_string(), r.n.to_string()];
        rec.extend([a0, a1, a2, r.sqr, r.r2, r.r2_adj, r.rms].iter().map(|v| v.to_string()));
        w.write_record(rec).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn write_meta(path: &Path, cfg: &RunConfig, outcomes: &[LevelOutcome], wall: f64) -> CliResult<()> {
    let mut table = cfg.to_table()?;
    let mut info = toml::Table::new();
    info.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    info.insert("wall_time_s".into(), wall.into());
    info.insert(
        "completed_levels".into(),
        toml::Value::Array(outcomes.iter().map(|o| o.level.into()).collect()),
    );
    info.insert(
        "front_sizes".into(),
        toml::Value::Array(outcomes.iter().map(|o| (o.rows.len() as i64).into()).collect()),
    );
    table.insert(RUN_INFO_TABLE.into(), toml::Value::Table(info));
    let text = toml::to_string(&table).map_err(|e| CliError::config(e.to_string()))?;
    let mut w = create(path)?;
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}

/// Runs the configured pipeline and writes fronts, statistics and metadata.
/// Levels that fail are reported after the others have been written.
pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let start = Instant::now();
    let id = cfg.problem_id()?;
    let prefix = cfg.output_prefix()?;
    let base = base_problem(cfg, id)?;
    let header = header(&base, cfg.mode);

    let results: Vec<CliResult<LevelOutcome>> = match cfg.mode {
        Mode::Deterministic => vec![deterministic(cfg, id)],
        Mode::Rbdo => {
            let beta = cfg.beta.ok_or_else(|| CliError::config("beta unresolved"))?;
            cfg.delta
                .iter()
                .map(|&l| rbdo(cfg, &base, l, beta).map_err(|e| e.context(&format!("delta={l}"))))
                .collect()
        }
        Mode::Rbrdo => rbrdo_levels(cfg, &base)?,
    };

    let mut outcomes = Vec::new();
    let mut first_error = None;
    for r in results {
        match r {
            Ok(o) => outcomes.push(o),
            Err(e) => {
                log::error!("{e}");
                first_error.get_or_insert(e);
            }
        }
    }

    let rms = cfg.rms_convention()?;
    let mut fits = Vec::new();
    for o in &outcomes {
        let path = front_path(&prefix, o.level);
        write_front(&path, &header, &o.rows)?;
        println!("front delta_level={} members={} file={}", o.level, o.rows.len(), path.display());
        if cfg.history {
            let path = history_path(&prefix, o.level);
            let mut w = create(&path)?;
            write_history(&o.history, &mut w)
                .and_then(|_| w.flush())
                .map_err(|e| CliError::io(&path, e))?;
        }
        if cfg.mode == Mode::Rbrdo {
            let n = base.design_bounds().dim();
            let x: Vec<f64> = o.rows.iter().map(|r| r[n]).collect();
            let y: Vec<f64> = o.rows.iter().map(|r| r[n + 1]).collect();
            match fit_report(&x, &y, rms) {
                Ok(fit) => {
                    println!("fit delta_level={} {fit}", o.level);
                    fits.push((o.level, fit));
                }
                Err(e) => log::warn!("delta={}: no quadratic fit of the front: {e}", o.level),
            }
        }
    }
    if cfg.mode == Mode::Rbrdo {
        write_stats(&stats_path(&prefix), &fits)?;
    }
    write_meta(&meta_path(&prefix), cfg, &outcomes, start.elapsed().as_secs_f64())?;
    first_error.map_or(Ok(()), Err)
}
