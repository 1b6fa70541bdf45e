// Retrieval precision/recall/F1/hit, ROUGE-2 and ROUGE-SU4, and the
// seed-averaged aggregate block used in reports.

use std::collections::BTreeSet;
use std::error::Error;

use serts::metrics::{aggregate, question_metrics, retrieval_metrics, rouge2, rouge_su4};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let gold: BTreeSet<String> = ["d2", "d4"].iter().map(|s| s.to_string()).collect();
    let m = retrieval_metrics(&["d1", "d2", "d3"], &gold);
    println!("P={:.4} R={:.4} F1={:.4} hit={}", m.precision, m.recall, m.f1, m.hit);

    let r = rouge2("a b x d", "a b c d");
    println!("rouge2     R={:.4} P={:.4} F1={:.4}", r.recall, r.precision, r.f1);
    let s = rouge_su4("b a", "a b");
    println!("rouge_su4  R={:.4} P={:.4} F1={:.4}", s.recall, s.precision, s.f1);

    let ideal = "Glofitamab treats relapsed diffuse large B-cell lymphoma.";
    let answer = "Glofitamab is used for relapsed diffuse large B-cell lymphoma.";
    let r = rouge2(answer, ideal);
    let s = rouge_su4(answer, ideal);
    println!("answer vs ideal: rouge2 F1={:.4}, rougeSU4 F1={:.4}", r.f1, s.f1);

    let ids = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let seed_a = vec![
        question_metrics(&ids(&["d2"]), &gold, Some(answer), Some(ideal), 120, 12),
        question_metrics(&ids(&["d9"]), &gold, None, None, 80, 5),
    ];
    let seed_b = vec![
        question_metrics(&ids(&["d2", "d4"]), &gold, Some(ideal), Some(ideal), 100, 12),
        question_metrics(&ids(&["d4"]), &gold, None, None, 90, 7),
    ];
    let report = aggregate(&[seed_a, seed_b]);
    println!("\n{}", serde_json::to_string_pretty(&report)?);
    assert_eq!(report.hit_rate, 75.0);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
