//! Where results go: files under `--out`, or stdout.

use std::io::Write;
use std::path::Path;

use anyhow::Context;

/// One output file of a command.
pub struct Artifact {
    pub name: String,
    pub content: String,
}

impl Artifact {
    pub fn new(name: impl Into<String>, content: impl Into<String>) -> Self {
        Artifact {
            name: name.into(),
            content: content.into(),
        }
    }

    pub fn json(name: impl Into<String>, value: &serde_json::Value) -> Self {
        let mut s = serde_json::to_string_pretty(value).expect("JSON values serialise");
        s.push('\n');
        Artifact::new(name, s)
    }
}

/// Writes every artifact into `dir` (created if needed) and lists the paths
/// on stderr.
pub fn write_all(dir: &Path, artifacts: &[Artifact]) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for a in artifacts {
        let path = dir.join(&a.name);
        std::fs::write(&path, &a.content).with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

/// Writes to `--out` when given, otherwise prints the artifact picked by
/// `primary` on stdout.
pub fn deliver(out: Option<&Path>, artifacts: &[Artifact], primary: usize) -> anyhow::Result<()> {
    match out {
        Some(dir) => write_all(dir, artifacts),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(artifacts[primary].content.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
