mod common;

use std::collections::HashSet;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serts::gateway::MockEntry;
use serts::orchestrator::run_serts_with_tree;
use serts::{
    generate_answer, run_bm25, run_reflection, run_serts, ChatRequest, Role, SearchConfig, SelectionPolicy,
};

fn by_role(reqs: &[ChatRequest], role: Role) -> Vec<&ChatRequest> {
    reqs.iter().filter(|r| r.key.role == role).collect()
}

#[test]
fn constant_reward_spends_full_budget_and_goes_deep() {
    let (gw, rec) = recording_gateway(constant_script("glofitamab lymphoma", 3));
    let (out, records, tree) =
        run_serts_with_tree(&glofitamab_question(), &bio_index(), &gw, &SearchConfig::default(), 42).unwrap();
    assert_eq!(records.len(), 12);
    assert_eq!(tree.len(), 13);
    assert!(tree.nodes().iter().any(|n| n.depth > 1));
    assert_eq!(out.simulations_used, 12);
    assert_eq!(rec.take().len(), 24);
}

#[test]
fn skip_simulations_make_no_calls() {
    let (gw, rec) = recording_gateway(constant_script("glofitamab", 2));
    let cfg = SearchConfig { max_sim: 5, max_branch: 1, max_depth: 2, ..Default::default() };
    let (out, records) = run_serts(&glofitamab_question(), &bio_index(), &gw, &cfg, 1).unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(out.simulations_used, 5);
    assert_eq!(rec.take().len(), 4);
    assert_eq!(out.llm_calls, 4);
}

#[test]
fn evaluator_sees_union_of_chain_docs() {
    let queries = ["cytokine release syndrome", "car t-cell therapy", "glofitamab monkeys", "tocilizumab"];
    let mut script = vec![MockEntry::wildcard("*", Some(Role::Eval), score_reply(2))];
    for (i, path) in all_paths(3, 3).into_iter().enumerate() {
        script.push(MockEntry::wildcard(path, Some(Role::Query), query_reply(queries[i % queries.len()])));
    }
    let (gw, rec) = recording_gateway(script);
    let index = bio_index();
    let (_, records, tree) =
        run_serts_with_tree(&glofitamab_question(), &index, &gw, &SearchConfig::default(), 9).unwrap();
    let evals = by_role(&rec.take(), Role::Eval).into_iter().cloned().collect::<Vec<_>>();
    assert_eq!(evals.len(), records.len());
    for (req, r) in evals.iter().zip(&records) {
        let chain = tree.chain_docs(r.node_id);
        let docs: Vec<&str> = chain.iter().map(|id| index.corpus().get(id).unwrap().text.as_str()).collect();
        for (i, text) in docs.iter().enumerate() {
            assert!(req.prompt.contains(&format!("{}. {text}", i + 1)), "{}", req.key);
        }
        assert!(!req.prompt.contains(&format!("{}. ", docs.len() + 1)) || docs.len() >= 9);
        assert_eq!(tree.node_path(r.node_id), req.key.node_path);
    }
}

#[test]
fn sibling_block_only_in_tree_search() {
    let (gw, rec) = recording_gateway(constant_script("lymphoma", 2));
    run_reflection(&glofitamab_question(), &bio_index(), &gw, &SearchConfig::default(), 3).unwrap();
    let reqs = rec.take();
    assert_eq!(by_role(&reqs, Role::Query).len(), 12);
    assert!(reqs.iter().all(|r| !r.prompt.contains("<query_proposal>")));

    let (gw, rec) = recording_gateway(constant_script("lymphoma", 2));
    let (_, _, tree) =
        run_serts_with_tree(&glofitamab_question(), &bio_index(), &gw, &SearchConfig::default(), 3).unwrap();
    let reqs = rec.take();
    for r in by_role(&reqs, Role::Query) {
        assert!(r.prompt.contains("<query_proposal>"));
        let has_sibling = !r.key.node_path.ends_with("/0");
        assert_eq!(r.prompt.contains("Corresponding Feedback:"), has_sibling, "{}", r.key);
    }
    assert!(tree.len() > 4);
}

#[test]
fn reflection_is_a_growing_chain() {
    let queries = ["glofitamab", "lymphoma", "car t-cell", "cytokine", "follicular"];
    let mut script = vec![MockEntry::wildcard("*", Some(Role::Eval), score_reply(1))];
    let mut path = String::new();
    for (i, q) in queries.iter().cycle().take(12).enumerate() {
        path.push_str("/0");
        script.push(MockEntry::wildcard(path.clone(), Some(Role::Query), query_reply(q)));
        if i == 6 {
            script.push(MockEntry::wildcard(path.clone(), Some(Role::Eval), score_reply(4)));
        }
    }
    let gw = mock_gateway(script);
    let (out, records) = run_reflection(&glofitamab_question(), &bio_index(), &gw, &SearchConfig::default(), 5).unwrap();
    assert_eq!(records.len(), 12);
    for (i, r) in records.iter().enumerate() {
        assert_eq!(r.node_id, i + 1);
        assert_eq!(r.parent_id, i);
    }
    assert_eq!(out.best_reward, 4);
    assert_eq!(out.best_reward, records.iter().map(|r| r.reward).max().unwrap());
}

#[test]
fn best_reward_is_max_of_records() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for seed in 0..20u64 {
        let mut script = vec![MockEntry::wildcard("*", Some(Role::Query), query_reply("lymphoma"))];
        for path in all_paths(3, 3) {
            script.push(MockEntry::wildcard(path, Some(Role::Eval), score_reply(rng.random_range(0..5))));
        }
        let gw = mock_gateway(script);
        let (out, records) = run_serts(&glofitamab_question(), &bio_index(), &gw, &SearchConfig::default(), seed).unwrap();
        assert_eq!(out.best_reward, records.iter().map(|r| r.reward).max().unwrap_or(0));
    }
}

#[test]
fn unparseable_evaluator_scores_zero_with_raw_feedback() {
    let gw = mock_gateway(vec![
        MockEntry::wildcard("*", Some(Role::Query), query_reply("lymphoma")),
        MockEntry::wildcard("*", Some(Role::Eval), "I cannot grade this."),
    ]);
    let cfg = SearchConfig { max_sim: 2, ..Default::default() };
    let (_, records) = run_serts(&glofitamab_question(), &bio_index(), &gw, &cfg, 0).unwrap();
    assert_eq!(records.len(), 2);
    assert!(records.iter().all(|r| r.reward == 0 && r.feedback == "I cannot grade this."));
}

#[test]
fn random_policy_varies_with_seed_but_replays() {
    let cfg = SearchConfig { policy: SelectionPolicy::Random, ..Default::default() };
    let run = |seed| {
        let gw = mock_gateway(constant_script("glofitamab", 1));
        let (_, _, tree) = run_serts_with_tree(&glofitamab_question(), &bio_index(), &gw, &cfg, seed).unwrap();
        tree.dump()
    };
    assert_eq!(run(5), run(5));
    let shapes: HashSet<String> = (0..8).map(run).collect();
    assert!(shapes.len() > 1);
}

#[test]
fn bm25_baseline_and_answer_prompt() {
    let index = bio_index();
    let q = glofitamab_question();
    let out = run_bm25(&q, &index, 3);
    assert_eq!(out.doc_ids.len(), 3);
    assert_eq!(out.llm_calls, 0);

    let (gw, rec) = recording_gateway(constant_script("x", 0));
    let resp = generate_answer(&q, &out.doc_ids, index.corpus(), &gw, Some(42)).unwrap();
    assert_eq!(resp.text, "Glofitamab treats relapsed B-cell lymphoma.");
    let reqs = rec.take();
    assert_eq!(reqs[0].key.node_path, "/");
    assert!(reqs[0].prompt.starts_with("You are an expert in the field of biomedical science."));
    let first = index.corpus().get(&out.doc_ids[0]).unwrap();
    let second = index.corpus().get(&out.doc_ids[1]).unwrap();
    assert!(reqs[0].prompt.contains(&format!("{}\n\n{}", first.text, second.text)));
    assert_eq!(reqs[0].seed, Some(42));
}

#[test]
fn missing_mock_key_fails_the_question() {
    let gw = mock_gateway(vec![MockEntry::wildcard("*", Some(Role::Query), query_reply("x"))]);
    let err = run_serts(&glofitamab_question(), &bio_index(), &gw, &SearchConfig::default(), 0).unwrap_err();
    assert!(err.to_string().contains("eval"), "{err}");
}
