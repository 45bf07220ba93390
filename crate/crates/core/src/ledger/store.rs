use std::fs::{self, File, OpenOptions};
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::hash::{write_leb, Reader};

use super::block::Block;

/// Append-only block file plus JSON snapshots keyed by 32-byte hashes.
#[derive(Clone, Debug)]
pub struct Store {
    dir: PathBuf,
}

fn invalid(e: impl std::fmt::Display) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, e.to_string())
}

impl Store {
    pub fn open(dir: impl AsRef<Path>) -> io::Result<Store> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(dir.join("snapshots"))?;
        Ok(Store { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn blocks_path(&self) -> PathBuf {
        self.dir.join("blocks.dat")
    }

    pub fn append_block(&self, b: &Block) -> io::Result<()> {
        let bytes = b.to_bytes();
        let mut rec = Vec::with_capacity(bytes.len() + 5);
        write_leb(&mut rec, bytes.len() as u64);
        rec.extend_from_slice(&bytes);
        let mut f = OpenOptions::new().create(true).append(true).open(self.blocks_path())?;
        f.write_all(&rec)
    }

    pub fn load_blocks(&self) -> io::Result<Vec<Block>> {
        let mut buf = Vec::new();
        match File::open(self.blocks_path()) {
            Ok(mut f) => {
                f.read_to_end(&mut buf)?;
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e),
        }
        let mut r = Reader::new(&buf);
        let mut out = Vec::new();
        while r.pos() < buf.len() {
            let rec = r.blob().map_err(invalid)?;
            out.push(Block::from_bytes(rec).map_err(invalid)?);
        }
        Ok(out)
    }

    pub fn put_snapshot<T: Serialize>(&self, key: &[u8; 32], value: &T) -> io::Result<()> {
        let path = self.dir.join("snapshots").join(format!("{}.json", hex::encode(key)));
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_vec(value).map_err(invalid)?)?;
        fs::rename(tmp, path)
    }

    pub fn get_snapshot<T: DeserializeOwned>(&self, key: &[u8; 32]) -> io::Result<Option<T>> {
        let path = self.dir.join("snapshots").join(format!("{}.json", hex::encode(key)));
        match fs::read(path) {
            Ok(b) => Ok(Some(serde_json::from_slice(&b).map_err(invalid)?)),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e),
        }
    }
}
