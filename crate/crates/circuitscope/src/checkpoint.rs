//! Checkpoint container and binary file format.
//!
//! Layout: magic bytes `CKPT1`, a little-endian u32 byte length, a UTF-8
//! JSON header (format version, config, step, tokens_seen, parameter layout
//! table), then the parameters as little-endian f32 in layout order.
//! Parameters are held as f64 in memory; f32 -> f64 -> f32 is exact, so
//! load-then-save reproduces a file byte for byte.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;
use crate::error::{Error, Result};
use crate::params::{self, LayoutEntry, ParamIndex};

const MAGIC: &[u8; 5] = b"CKPT1";
pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;

/// Model configuration plus parameters at a training step.
#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub config: ModelConfig,
    pub params: Vec<f64>,
    pub step: u64,
    pub tokens_seen: u64,
}

#[derive(Serialize, Deserialize)]
struct Header {
    format_version: u32,
    config: ModelConfig,
    step: u64,
    tokens_seen: u64,
    layout: Vec<LayoutEntry>,
}

/// Build a freshly initialized model at step 0.
pub fn build_model(config: &ModelConfig) -> Result<Checkpoint> {
    config.validate()?;
    Ok(Checkpoint {
        config: config.clone(),
        params: params::init_params(config),
        step: 0,
        tokens_seen: 0,
    })
}

impl Checkpoint {
    pub fn index(&self) -> ParamIndex {
        ParamIndex::new(&self.config)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let header = Header {
            format_version: CHECKPOINT_FORMAT_VERSION,
            config: self.config.clone(),
            step: self.step,
            tokens_seen: self.tokens_seen,
            layout: ParamIndex::layout_table(&self.config),
        };
        let header_bytes = serde_json::to_vec(&header)?;
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(MAGIC)?;
        w.write_all(&(header_bytes.len() as u32).to_le_bytes())?;
        w.write_all(&header_bytes)?;
        for &p in &self.params {
            w.write_all(&(p as f32).to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Checkpoint> {
        let mut r = BufReader::new(
            File::open(path).map_err(|_| Error::MissingFile(path.display().to_string()))?,
        );
        let mut magic = [0u8; 5];
        r.read_exact(&mut magic)
            .map_err(|_| Error::BadCheckpoint("file too short for magic".into()))?;
        if &magic != MAGIC {
            return Err(Error::VersionMismatch {
                found: u32::from(magic[4].saturating_sub(b'0')),
                supported: CHECKPOINT_FORMAT_VERSION,
            });
        }
        let mut len = [0u8; 4];
        r.read_exact(&mut len)
            .map_err(|_| Error::BadCheckpoint("file too short for header length".into()))?;
        let mut header_bytes = vec![0u8; u32::from_le_bytes(len) as usize];
        r.read_exact(&mut header_bytes)
            .map_err(|_| Error::BadCheckpoint("file too short for header".into()))?;
        let header: Header = serde_json::from_slice(&header_bytes)?;
        if header.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                found: header.format_version,
                supported: CHECKPOINT_FORMAT_VERSION,
            });
        }
        header.config.validate()?;
        let expected_layout = ParamIndex::layout_table(&header.config);
        if header.layout != expected_layout {
            return Err(Error::BadCheckpoint(
                "layout table does not match the one implied by config".into(),
            ));
        }
        let count = params::param_count(&header.config);
        let mut raw = vec![0u8; count * 4];
        r.read_exact(&mut raw)
            .map_err(|_| Error::BadCheckpoint("parameter section truncated".into()))?;
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing)? != 0 {
            return Err(Error::BadCheckpoint("trailing bytes after parameters".into()));
        }
        let params = raw
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64)
            .collect();
        Ok(Checkpoint {
            config: header.config,
            params,
            step: header.step,
            tokens_seen: header.tokens_seen,
        })
    }
}

/// Name of the checkpoint file written at `step`.
pub fn checkpoint_file_name(step: u64) -> String {
    format!("ckpt-{step:07}.bin")
}

/// Scan a directory for checkpoint files, sorted by step.
pub fn list_checkpoints(dir: &Path) -> Result<Vec<(u64, std::path::PathBuf)>> {
    let mut found = Vec::new();
    for entry in std::fs::read_dir(dir)
        .map_err(|_| Error::MissingFile(dir.display().to_string()))?
    {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if let Some(step) =
            name.strip_prefix("ckpt-").and_then(|s| s.strip_suffix(".bin"))
        {
            if let Ok(step) = step.parse::<u64>() {
                found.push((step, entry.path()));
            }
        }
    }
    found.sort();
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ModelConfig {
        ModelConfig {
            n_layers: 1,
            n_heads: 2,
            d_model: 8,
            d_mlp: 16,
            vocab_size: 16,
            max_seq_len: 4,
            seed: 7,
        }
    }

    #[test]
    fn build_model_is_deterministic() {
        let cfg = tiny_config();
        let a = build_model(&cfg).unwrap();
        let b = build_model(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.step, 0);
        assert_eq!(a.tokens_seen, 0);
    }

    #[test]
    fn build_model_rejects_bad_config() {
        let cfg = ModelConfig { d_model: 8, n_heads: 3, ..tiny_config() };
        assert!(build_model(&cfg).is_err());
    }

    #[test]
    fn save_load_save_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let ckpt = build_model(&tiny_config()).unwrap();
        let p1 = dir.path().join("a.bin");
        let p2 = dir.path().join("b.bin");
        ckpt.save(&p1).unwrap();
        let loaded = Checkpoint::load(&p1).unwrap();
        loaded.save(&p2).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
        assert_eq!(loaded.config, ckpt.config);
    }

    #[test]
    fn rejects_wrong_magic() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.bin");
        std::fs::write(&p, b"CKPT2junkjunkjunk").unwrap();
        assert!(matches!(Checkpoint::load(&p), Err(Error::VersionMismatch { .. })));
    }

    #[test]
    fn rejects_truncated_params() {
        let dir = tempfile::tempdir().unwrap();
        let ckpt = build_model(&tiny_config()).unwrap();
        let p = dir.path().join("t.bin");
        ckpt.save(&p).unwrap();
        let mut bytes = std::fs::read(&p).unwrap();
        bytes.truncate(bytes.len() - 8);
        std::fs::write(&p, &bytes).unwrap();
        assert!(matches!(Checkpoint::load(&p), Err(Error::BadCheckpoint(_))));
    }
}
