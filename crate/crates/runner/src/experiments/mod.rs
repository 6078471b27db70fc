//! The experiment registry.

use std::fs;
use std::path::{Path, PathBuf};

use bergman_lab::quadrature::{build_quadrature, QuadratureRule};
use serde::Serialize;

use crate::config::{ExperimentConfig, ExperimentId};
use crate::error::{RunError, RunResult};
use crate::report::RunReport;

mod geometry;
mod hankel;
mod integrals;
mod spaces;

/// Per-run state: the artifact directory and the report being filled.
pub(crate) struct Ctx<'a> {
    pub cfg: &'a ExperimentConfig,
    pub dir: PathBuf,
    pub report: RunReport,
}

/// Attaches the name of the failing check to a library error.
pub(crate) fn num<T>(check: &str, r: bergman_lab::Result<T>) -> RunResult<T> {
    r.map_err(|source| RunError::Numeric { check: check.to_string(), source })
}

impl<'a> Ctx<'a> {
    fn path(&mut self, name: &str) -> PathBuf {
        self.report.artifacts.push(name.to_string());
        self.dir.join(name)
    }

    pub fn create(&mut self, name: &str) -> RunResult<fs::File> {
        let p = self.path(name);
        fs::File::create(&p).map_err(|source| RunError::Io { path: p.display().to_string(), source })
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> RunResult<()> {
        let f = self.create(name)?;
        serde_json::to_writer_pretty(f, value)?;
        Ok(())
    }

    /// Writes a CSV whose rows are already formatted.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> RunResult<()> {
        let mut w = csv::Writer::from_writer(self.create(name)?);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush().map_err(|source| RunError::Io { path: name.to_string(), source })?;
        Ok(())
    }

    /// The configured rule for the `i`-th dimension.
    pub fn rule(&self, i: usize) -> RunResult<QuadratureRule> {
        num("quadrature", build_quadrature(self.cfg.dims[i], self.cfg.rule_spec(i)))
    }
}

pub(crate) fn dispatch(cfg: &ExperimentConfig, dir: &Path) -> RunResult<RunReport> {
    fs::create_dir_all(dir).map_err(|source| RunError::Io { path: dir.display().to_string(), source })?;
    let mut ctx = Ctx { cfg, dir: dir.to_path_buf(), report: RunReport::new(cfg) };
    match cfg.experiment_id {
        ExperimentId::E1 => geometry::e1(&mut ctx)?,
        ExperimentId::E2 => geometry::e2(&mut ctx)?,
        ExperimentId::E3 => integrals::e3(&mut ctx)?,
        ExperimentId::E4 => integrals::e4(&mut ctx)?,
        ExperimentId::E5 => integrals::e5(&mut ctx)?,
        ExperimentId::E6 => hankel::e6(&mut ctx)?,
        ExperimentId::E7 => hankel::e7(&mut ctx)?,
        ExperimentId::E8 => hankel::e8(&mut ctx)?,
        ExperimentId::E9 => spaces::e9(&mut ctx)?,
        ExperimentId::E10 => spaces::e10(&mut ctx)?,
    }
    Ok(ctx.report)
}
