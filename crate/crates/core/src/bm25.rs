//! Okapi BM25 over an in-memory inverted index.
//!
//! Scoring uses the non-negative IDF variant
//! `ln((N - n + 0.5) / (n + 0.5) + 1)` and sums over query term occurrences,
//! so a term repeated in the query contributes once per occurrence.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::corpus::{tokenize, Corpus, Document};
use crate::error::{Error, Result};

const INDEX_FORMAT: &str = "serts-bm25";
const INDEX_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Self { k1: 1.2, b: 0.75 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub doc: u32,
    pub tf: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredHit {
    pub doc_id: String,
    pub score: f64,
}

/// Inverted index over a shared corpus. Immutable once built.
#[derive(Debug, Clone)]
pub struct Bm25Index {
    corpus: Arc<Corpus>,
    params: Bm25Params,
    /// Postings per term, sorted by ascending document ordinal.
    postings: HashMap<String, Vec<Posting>>,
    doc_lens: Vec<u32>,
}

impl Bm25Index {
    pub fn build(corpus: Arc<Corpus>, params: Bm25Params) -> Self {
        let mut postings: HashMap<String, Vec<Posting>> = HashMap::new();
        let mut doc_lens = Vec::with_capacity(corpus.len());
        for (ordinal, doc) in corpus.docs().iter().enumerate() {
            let terms = tokenize(&doc.text);
            doc_lens.push(terms.len() as u32);
            let mut counts: BTreeMap<String, u32> = BTreeMap::new();
            for t in terms {
                *counts.entry(t).or_default() += 1;
            }
            for (term, tf) in counts {
                postings.entry(term).or_default().push(Posting {
                    doc: ordinal as u32,
                    tf,
                });
            }
        }
        Self {
            corpus,
            params,
            postings,
            doc_lens,
        }
    }

    pub fn corpus(&self) -> &Arc<Corpus> {
        &self.corpus
    }

    pub fn params(&self) -> Bm25Params {
        self.params
    }

    pub fn num_docs(&self) -> usize {
        self.doc_lens.len()
    }

    pub fn num_terms(&self) -> usize {
        self.postings.len()
    }

    pub fn postings(&self, term: &str) -> &[Posting] {
        self.postings.get(term).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Number of documents containing `term`.
    pub fn doc_freq(&self, term: &str) -> usize {
        self.postings(term).len()
    }

    pub fn doc_len(&self, ordinal: usize) -> u32 {
        self.doc_lens[ordinal]
    }

    pub fn idf(&self, term: &str) -> f64 {
        let n = self.doc_freq(term) as f64;
        let total = self.num_docs() as f64;
        ((total - n + 0.5) / (n + 0.5) + 1.0).ln()
    }

    fn term_weight(&self, idf: f64, tf: u32, doc_len: u32) -> f64 {
        let Bm25Params { k1, b } = self.params;
        let tf = tf as f64;
        let avgdl = self.corpus.avg_doc_len();
        // A document only has postings when its length is positive, so avgdl > 0 here.
        let norm = 1.0 - b + b * doc_len as f64 / avgdl;
        idf * tf * (k1 + 1.0) / (tf + k1 * norm)
    }

    fn tf(&self, term: &str, ordinal: u32) -> u32 {
        let list = self.postings(term);
        list.binary_search_by_key(&ordinal, |p| p.doc)
            .map(|i| list[i].tf)
            .unwrap_or(0)
    }

    /// Scores one indexed document against pre-tokenized query terms.
    ///
    /// Returns 0 for documents that are not part of the indexed corpus.
    pub fn score(&self, query_terms: &[String], doc: &Document) -> f64 {
        let Some(ordinal) = self.corpus.ordinal(&doc.id) else {
            return 0.0;
        };
        self.score_ordinal(query_terms, ordinal)
    }

    fn score_ordinal(&self, query_terms: &[String], ordinal: usize) -> f64 {
        let doc_len = self.doc_lens[ordinal];
        let mut total = 0.0;
        for term in query_terms {
            let tf = self.tf(term, ordinal as u32);
            if tf > 0 {
                total += self.term_weight(self.idf(term), tf, doc_len);
            }
        }
        total
    }

    /// Top `top_k` documents for `query`, best first. Ties go to the earlier
    /// document; documents scoring zero are never returned.
    pub fn search(&self, query: &str, top_k: usize) -> Vec<ScoredHit> {
        let terms = tokenize(query);
        let mut acc = vec![0.0f64; self.num_docs()];
        let mut touched = vec![false; self.num_docs()];
        for term in &terms {
            let list = self.postings(term);
            if list.is_empty() {
                continue;
            }
            let idf = self.idf(term);
            for p in list {
                let i = p.doc as usize;
                acc[i] += self.term_weight(idf, p.tf, self.doc_lens[i]);
                touched[i] = true;
            }
        }
        let mut hits: Vec<(usize, f64)> = acc
            .into_iter()
            .enumerate()
            .filter(|&(i, s)| touched[i] && s > 0.0)
            .collect();
        hits.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        hits.truncate(top_k);
        hits.into_iter()
            .map(|(i, score)| ScoredHit {
                doc_id: self.corpus.docs()[i].id.clone(),
                score,
            })
            .collect()
    }

    /// Writes the index, including the documents it covers, to a single JSON file.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut postings: Vec<(&String, &Vec<Posting>)> = self.postings.iter().collect();
        postings.sort_by(|a, b| a.0.cmp(b.0));
        let file = IndexFileRef {
            format: INDEX_FORMAT,
            version: INDEX_VERSION,
            params: self.params,
            docs: self.corpus.docs(),
            doc_lens: &self.doc_lens,
            postings,
        };
        let bytes = serde_json::to_vec(&file)?;
        fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let file: IndexFile = serde_json::from_slice(&bytes)?;
        if file.format != INDEX_FORMAT {
            return Err(Error::IndexFormat(format!("unexpected format tag {:?}", file.format)));
        }
        if file.version != INDEX_VERSION {
            return Err(Error::IndexFormat(format!(
                "unsupported version {} (expected {INDEX_VERSION})",
                file.version
            )));
        }
        if file.doc_lens.len() != file.docs.len() {
            return Err(Error::IndexFormat("document length table does not match documents".into()));
        }
        let docs = file
            .docs
            .into_iter()
            .map(|d| Document::new(d.id, d.text))
            .collect();
        let corpus = Corpus::from_documents(docs)?;
        Ok(Self {
            corpus: Arc::new(corpus),
            params: file.params,
            postings: file.postings.into_iter().collect(),
            doc_lens: file.doc_lens,
        })
    }
}

#[derive(Serialize)]
struct IndexFileRef<'a> {
    format: &'a str,
    version: u32,
    params: Bm25Params,
    docs: &'a [Document],
    doc_lens: &'a [u32],
    postings: Vec<(&'a String, &'a Vec<Posting>)>,
}

#[derive(Deserialize)]
struct IndexFile {
    format: String,
    version: u32,
    params: Bm25Params,
    docs: Vec<Document>,
    doc_lens: Vec<u32>,
    postings: Vec<(String, Vec<Posting>)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn index_of(texts: &[&str]) -> Bm25Index {
        let docs = texts
            .iter()
            .enumerate()
            .map(|(i, t)| Document::new(format!("d{i}"), *t))
            .collect();
        Bm25Index::build(Arc::new(Corpus::from_documents(docs).unwrap()), Bm25Params::default())
    }

    #[test]
    fn empty_corpus() {
        let idx = index_of(&[]);
        assert_eq!(idx.num_terms(), 0);
        assert!(idx.search("anything", 3).is_empty());
    }

    #[test]
    fn doc_freq_counts() {
        let idx = index_of(&["a b", "a"]);
        assert_eq!(idx.doc_freq("a"), 2);
        assert_eq!(idx.doc_freq("b"), 1);
        assert_eq!(idx.doc_freq("zzz"), 0);
    }

    #[test]
    fn idf_values() {
        let idx = index_of(&["x", "y"]);
        assert!((idx.idf("unseen") - 6f64.ln()).abs() < 1e-12);
        assert!((idx.idf("unseen") - 1.791_759_469_228_055).abs() < 1e-12);
        let idx = index_of(&["x"]);
        assert!((idx.idf("x") - (4.0f64 / 3.0).ln()).abs() < 1e-12);
        assert!((idx.idf("x") - 0.287_682_072_451_780_9).abs() < 1e-12);
        let many: Vec<&str> = std::iter::repeat_n("common", 1000).collect();
        assert!(index_of(&many).idf("common") > 0.0);
    }

    #[test]
    fn zero_scores() {
        let idx = index_of(&["alpha beta", "gamma"]);
        let doc = &idx.corpus().docs()[1];
        assert_eq!(idx.score(&["alpha".into()], doc), 0.0);
        assert_eq!(idx.score(&[], doc), 0.0);
        assert!(idx.search("delta", 5).is_empty());
    }

    #[test]
    fn query_duplicates_count_twice() {
        let idx = index_of(&["alpha beta", "gamma"]);
        let doc = &idx.corpus().docs()[0];
        let once = idx.score(&["alpha".into()], doc);
        let twice = idx.score(&["alpha".into(), "alpha".into()], doc);
        assert_eq!(twice, once + once);
    }

    #[test]
    fn ties_prefer_earlier_doc() {
        let idx = index_of(&["other", "shared word", "shared word"]);
        let hits = idx.search("shared", 5);
        assert_eq!(hits.len(), 2);
        assert_eq!(hits[0].score, hits[1].score);
        assert_eq!(hits[0].doc_id, "d1");
        assert_eq!(hits[1].doc_id, "d2");
    }

    #[test]
    fn persisted_index_gives_same_results() {
        let idx = index_of(&["glofitamab lymphoma", "car t cell lymphoma therapy", "monkey dose"]);
        let f = tempfile::NamedTempFile::new().unwrap();
        idx.save(f.path()).unwrap();
        let back = Bm25Index::load(f.path()).unwrap();
        for q in ["lymphoma", "glofitamab dose", "t cell therapy lymphoma", "none"] {
            assert_eq!(idx.search(q, 3), back.search(q, 3));
        }
    }

    #[test]
    fn rejects_wrong_version() {
        let f = tempfile::NamedTempFile::new().unwrap();
        fs::write(
            f.path(),
            r#"{"format":"serts-bm25","version":99,"params":{"k1":1.2,"b":0.75},"docs":[],"doc_lens":[],"postings":[]}"#,
        )
        .unwrap();
        assert!(matches!(Bm25Index::load(f.path()), Err(Error::IndexFormat(_))));
    }
}
