use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

/// One command's output directory. Every file carries the resolved config:
/// CSVs as leading `# ` lines, the summary as a `config` field.
pub struct OutputDir {
    dir: PathBuf,
    command: &'static str,
    config: RunConfig,
    header: String,
}

impl OutputDir {
    pub fn create(dir: &Path, command: &'static str, config: &RunConfig) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let toml = config.to_toml();
        let mut header = format!("# ringpair {} {command}\n", env!("CARGO_PKG_VERSION"));
        for line in toml.lines() {
            header.push_str(if line.is_empty() { "#" } else { "# " });
            header.push_str(line);
            header.push('\n');
        }
        let out = Self {
            dir: dir.to_path_buf(),
            command,
            config: config.clone(),
            header,
        };
        out.write("config.toml", |w| {
            w.write_all(toml.as_bytes()).map_err(Into::into)
        })?;
        Ok(out)
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    fn write(
        &self,
        name: &str,
        body: impl FnOnce(&mut BufWriter<File>) -> ringpair::Result<()>,
    ) -> Result<PathBuf> {
        let path = self.dir.join(name);
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        let mut w = BufWriter::new(file);
        body(&mut w).map_err(|e| match e {
            ringpair::Error::Io(io) => CliError::io(&path, io),
            other => other.into(),
        })?;
        w.flush().map_err(|e| CliError::io(&path, e))?;
        log::info!("wrote {}", path.display());
        Ok(path)
    }

    pub fn csv(
        &self,
        name: &str,
        body: impl FnOnce(&mut BufWriter<File>) -> ringpair::Result<()>,
    ) -> Result<PathBuf> {
        self.write(name, |w| {
            w.write_all(self.header.as_bytes())?;
            body(w)
        })
    }

    pub fn summary<T: Serialize>(&self, results: &T) -> Result<PathBuf> {
        #[derive(Serialize)]
        struct Summary<'a, T> {
            command: &'static str,
            version: &'static str,
            config: &'a RunConfig,
            results: &'a T,
        }
        let summary = Summary {
            command: self.command,
            version: env!("CARGO_PKG_VERSION"),
            config: &self.config,
            results,
        };
        self.write("summary.json", |w| {
            serde_json::to_writer_pretty(&mut *w, &summary)?;
            writeln!(w)?;
            Ok(())
        })
    }
}
