use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use super::features::{features, BUCKETS, MAX_N, MIN_N};
use crate::error::{Error, Result};

pub const DIM: usize = 16;
const MAGIC: &[u8; 8] = b"SNLANGID";
const VERSION: u32 = 1;

pub type Row = [f32; DIM];

/// Averaged hashed-feature embeddings feeding a softmax over labels.
///
/// Input rows never touched in training are zero and not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct LangIdModel {
    pub(crate) labels: Vec<String>,
    pub(crate) input: HashMap<u32, Row>,
    pub(crate) output: Vec<Row>,
}

impl LangIdModel {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn stored_rows(&self) -> usize {
        self.input.len()
    }

    pub fn hidden(&self, feats: &[u32]) -> Row {
        let mut h = [0f32; DIM];
        for f in feats {
            if let Some(row) = self.input.get(f) {
                for (a, b) in h.iter_mut().zip(row) {
                    *a += b;
                }
            }
        }
        let n = feats.len().max(1) as f32;
        h.iter_mut().for_each(|x| *x /= n);
        h
    }

    /// Softmax over all labels, in label order.
    pub fn probabilities(&self, sentence: &str) -> Result<Vec<f64>> {
        let feats = features(sentence);
        if feats.is_empty() {
            return Err(Error::InvalidInput("cannot identify the language of an empty sentence".into()));
        }
        Ok(softmax(&self.output, &self.hidden(&feats)))
    }

    /// The `k` most probable labels, most probable first; ties by label order.
    pub fn predict_topk(&self, sentence: &str, k: usize) -> Result<Vec<(String, f64)>> {
        if k == 0 || k > self.labels.len() {
            return Err(Error::InvalidInput(format!(
                "k must be in 1..={}, got {k}",
                self.labels.len()
            )));
        }
        let probs = self.probabilities(sentence)?;
        let mut order: Vec<usize> = (0..probs.len()).collect();
        order.sort_by(|&a, &b| probs[b].total_cmp(&probs[a]).then(a.cmp(&b)));
        Ok(order
            .into_iter()
            .take(k)
            .map(|i| (self.labels[i].clone(), probs[i]))
            .collect())
    }

    pub fn is_finite(&self) -> bool {
        self.output.iter().chain(self.input.values()).flatten().all(|x| x.is_finite())
    }

    /// Magic, version, shape, label table, output block, then the stored
    /// input rows sorted by bucket. Little-endian throughout.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        for v in [VERSION, DIM as u32, BUCKETS, MIN_N as u32, MAX_N as u32, self.labels.len() as u32] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for l in &self.labels {
            out.extend_from_slice(&(l.len() as u32).to_le_bytes());
            out.extend_from_slice(l.as_bytes());
        }
        for row in &self.output {
            row.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes()));
        }
        let mut keys: Vec<u32> = self.input.keys().copied().collect();
        keys.sort_unstable();
        out.extend_from_slice(&(keys.len() as u64).to_le_bytes());
        for k in keys {
            out.extend_from_slice(&k.to_le_bytes());
            self.input[&k].iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes()));
        }
        out
    }

    pub fn from_bytes(mut bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::InvalidInput(format!("langid model: {m}"));
        let mut magic = [0u8; 8];
        bytes.read_exact(&mut magic).map_err(|_| bad("truncated header"))?;
        if &magic != MAGIC {
            return Err(bad("bad magic"));
        }
        let mut r = Reader(bytes);
        let header = [r.u32()?, r.u32()?, r.u32()?, r.u32()?, r.u32()?];
        if header != [VERSION, DIM as u32, BUCKETS, MIN_N as u32, MAX_N as u32] {
            return Err(bad("unsupported version or shape"));
        }
        let n_labels = r.u32()? as usize;
        let mut labels = Vec::with_capacity(n_labels);
        for _ in 0..n_labels {
            let len = r.u32()? as usize;
            let raw = r.take(len)?;
            labels.push(String::from_utf8(raw.to_vec()).map_err(|_| bad("label is not UTF-8"))?);
        }
        let output = (0..n_labels).map(|_| r.row()).collect::<Result<Vec<_>>>()?;
        let n_rows = r.u64()?;
        let mut input = HashMap::new();
        for _ in 0..n_rows {
            let k = r.u32()?;
            if k >= BUCKETS {
                return Err(bad("bucket out of range"));
            }
            input.insert(k, r.row()?);
        }
        if !r.0.is_empty() {
            return Err(bad("trailing bytes"));
        }
        Ok(LangIdModel { labels, input, output })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(&self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

struct Reader<'a>(&'a [u8]);

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.0.len() < n {
            return Err(Error::InvalidInput("langid model: truncated".into()));
        }
        let (head, tail) = self.0.split_at(n);
        self.0 = tail;
        Ok(head)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn row(&mut self) -> Result<Row> {
        let mut row = [0f32; DIM];
        for x in &mut row {
            *x = f32::from_le_bytes(self.take(4)?.try_into().unwrap());
        }
        Ok(row)
    }
}

pub(crate) fn dot(a: &Row, b: &Row) -> f32 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn softmax(output: &[Row], hidden: &Row) -> Vec<f64> {
    let scores: Vec<f64> = output.iter().map(|w| f64::from(dot(w, hidden))).collect();
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let z: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / z).collect()
}
