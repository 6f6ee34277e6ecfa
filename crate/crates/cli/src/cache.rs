//! On-disk [`ModelStore`]: one JSON file per (record, group, q, version).

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use dlres::dlchar::GreenEntry;
use dlres::restlab::ModelStore;
use dlres::GroupKind;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Bumped whenever the class ordering or Green key layout changes.
pub const FORMAT_VERSION: u32 = 1;

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    format_version: u32,
    record: String,
    q: u32,
    group: GroupKind,
    payload: T,
}

pub struct DiskStore {
    dir: PathBuf,
}

fn group_tag(kind: GroupKind) -> String {
    match kind {
        GroupKind::DetSubgroup { d_order } => format!("det{d_order}"),
        GroupKind::Borel => "borel".to_string(),
    }
}

impl DiskStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskStore { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, record: &str, q: u32, kind: GroupKind) -> PathBuf {
        self.dir
            .join(format!("{record}-{}-q{q}-v{FORMAT_VERSION}.json", group_tag(kind)))
    }

    fn load<T: DeserializeOwned>(&self, record: &str, q: u32, kind: GroupKind) -> Option<T> {
        let path = self.path(record, q, kind);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
            Err(e) => {
                log::warn!("cannot read {}: {e}; recomputing", path.display());
                return None;
            }
        };
        let env: Envelope<T> = match serde_json::from_str(&text) {
            Ok(env) => env,
            Err(e) => {
                log::warn!("corrupt cache file {}: {e}; recomputing", path.display());
                return None;
            }
        };
        if env.format_version != FORMAT_VERSION || env.record != record || env.q != q || env.group != kind {
            log::warn!("cache file {} does not match its key; recomputing", path.display());
            return None;
        }
        log::debug!("loaded {}", path.display());
        Some(env.payload)
    }

    fn store<T: Serialize>(&self, record: &str, q: u32, kind: GroupKind, payload: T) {
        let env = Envelope {
            format_version: FORMAT_VERSION,
            record: record.to_string(),
            q,
            group: kind,
            payload,
        };
        let path = self.path(record, q, kind);
        if let Err(e) = self.write_atomic(&path, &env) {
            log::warn!("cannot write cache file {}: {e}", path.display());
        }
    }

    fn write_atomic<T: Serialize>(&self, path: &Path, value: &T) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(
            ".{}.{}-{}.tmp",
            path.file_name().unwrap().to_string_lossy(),
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        fs::write(&tmp, serde_json::to_vec(value)?)?;
        fs::rename(&tmp, path).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }
}

impl ModelStore for DiskStore {
    fn load_classes(&self, q: u32, kind: GroupKind) -> Option<Vec<u32>> {
        self.load("classes", q, kind)
    }

    fn store_classes(&self, q: u32, kind: GroupKind, class_of: &[u32]) {
        self.store("classes", q, kind, class_of)
    }

    fn load_green(&self, q: u32, kind: GroupKind) -> Option<Vec<GreenEntry>> {
        self.load("green", q, kind)
    }

    fn store_green(&self, q: u32, kind: GroupKind, entries: &[GreenEntry]) {
        self.store("green", q, kind, entries)
    }
}
