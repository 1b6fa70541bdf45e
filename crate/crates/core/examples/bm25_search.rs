// Build a BM25 index over the sample abstracts, inspect term statistics and
// run a few searches. Also persists the index and reloads it.
//
//     cargo run --example bm25_search

use std::error::Error;
use std::sync::Arc;

use serts::{load_corpus, tokenize, Bm25Index, Bm25Params};

const CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/corpus.jsonl");

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let corpus = Arc::new(load_corpus(CORPUS)?);
    let index = Bm25Index::build(corpus.clone(), Bm25Params::default());
    println!(
        "{} abstracts, {} distinct terms, avgdl {:.2}",
        corpus.len(),
        index.num_terms(),
        corpus.avg_doc_len()
    );

    for term in ["glofitamab", "lymphoma", "dermatillomania"] {
        println!("idf({term}) = {:.4}  df = {}", index.idf(term), index.doc_freq(term));
    }

    let query = "Which B-cell lymphoma subtypes respond to glofitamab?";
    println!("\nquery tokens: {:?}", tokenize(query));
    let hits = index.search(query, 3);
    for (rank, hit) in hits.iter().enumerate() {
        println!("{}. {} {:.4}", rank + 1, hit.doc_id, hit.score);
    }
    assert!(!hits.is_empty());

    // Exhaustive scoring gives the same numbers as the inverted index.
    let terms = tokenize(query);
    for hit in &hits {
        let doc = corpus.get(&hit.doc_id).expect("hit is in the corpus");
        assert_eq!(index.score(&terms, doc), hit.score);
    }

    assert!(index.search("zebrafish", 3).is_empty());

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("index.json");
    index.save(&path)?;
    let reloaded = Bm25Index::load(&path)?;
    assert_eq!(reloaded.search(query, 3), hits);
    println!("\nreloaded index from {} gives identical results", path.display());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
