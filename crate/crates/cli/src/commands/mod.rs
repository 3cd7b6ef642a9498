use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sememe_core::TripletStore;

use crate::config::{ConfigError, RunConfig};
use crate::{Cli, Command};

mod analyze;
mod eval;
mod predict;
mod prepare;
mod synth;
mod train;

pub fn dispatch(cli: &Cli, config: &RunConfig) -> Result<()> {
    match &cli.command {
        Command::Prepare(_) => prepare::run(config),
        Command::Train(_) => train::run(config),
        Command::Predict(_) => predict::run(config),
        Command::Eval(a) => eval::run(config, &a.predictions),
        Command::Analyze(_) => analyze::run(config),
        Command::Synth(_) => synth::run(config),
    }
}

/// Fails with a config error unless `path` is set and exists.
pub(crate) fn require<'a>(path: &'a Option<PathBuf>, key: &str) -> Result<&'a Path, ConfigError> {
    let p = path
        .as_deref()
        .ok_or_else(|| ConfigError(format!("{key} is required")))?;
    check_exists(p, key)?;
    Ok(p)
}

pub(crate) fn check_exists(path: &Path, key: &str) -> Result<(), ConfigError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(ConfigError(format!(
            "{key}: no such file {}",
            path.display()
        )))
    }
}

/// Validates an optional input path.
pub(crate) fn optional<'a>(
    path: &'a Option<PathBuf>,
    key: &str,
) -> Result<Option<&'a Path>, ConfigError> {
    path.as_deref()
        .map(|p| check_exists(p, key).map(|_| p))
        .transpose()
}

pub(crate) fn load_dataset(config: &RunConfig) -> Result<TripletStore> {
    let dataset = require(&config.dataset, "input.dataset")?;
    let pos = optional(&config.pos, "input.pos")?;
    TripletStore::load_triplets(dataset, pos)
        .with_context(|| format!("loading {}", dataset.display()))
}

/// Output directory plus the resolved-config echo for `command`.
pub(crate) struct Output {
    dir: PathBuf,
}

impl Output {
    pub fn create(config: &RunConfig, command: &str) -> Result<Self> {
        let dir = config.output_dir.clone();
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        let out = Output { dir };
        out.write(&format!("{command}.config"), &config.echo())?;
        Ok(out)
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        log::info!("wrote {}", path.display());
        Ok(path)
    }
}
