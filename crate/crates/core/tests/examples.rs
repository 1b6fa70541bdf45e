#[allow(dead_code)]
mod bm25_search_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bm25_search.rs"));
}

#[test]
fn bm25_search_example_runs() {
    bm25_search_example::run_example().expect("bm25_search example should run");
}

#[allow(dead_code)]
mod prompts_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/prompts.rs"));
}

#[test]
fn prompts_example_runs() {
    prompts_example::run_example().expect("prompts example should run");
}

#[allow(dead_code)]
mod mock_backend_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/mock_backend.rs"));
}

#[test]
fn mock_backend_example_runs() {
    mock_backend_example::run_example().expect("mock_backend example should run");
}

#[allow(dead_code)]
mod serts_search_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/serts_search.rs"));
}

#[test]
fn serts_search_example_runs() {
    serts_search_example::run_example().expect("serts_search example should run");
}

#[allow(dead_code)]
mod reflection_vs_serts_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/reflection_vs_serts.rs"));
}

#[test]
fn reflection_vs_serts_example_runs() {
    reflection_vs_serts_example::run_example().expect("reflection_vs_serts example should run");
}

#[allow(dead_code)]
mod metrics_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/metrics.rs"));
}

#[test]
fn metrics_example_runs() {
    metrics_example::run_example().expect("metrics example should run");
}

#[allow(dead_code)]
mod trajectories_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/trajectories.rs"));
}

#[test]
fn trajectories_example_runs() {
    trajectories_example::run_example().expect("trajectories example should run");
}

#[allow(dead_code)]
mod selection_policies_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/selection_policies.rs"));
}

#[test]
fn selection_policies_example_runs() {
    selection_policies_example::run_example().expect("selection_policies example should run");
}

#[allow(dead_code)]
mod full_pipeline_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/full_pipeline.rs"));
}

#[test]
fn full_pipeline_example_runs() {
    full_pipeline_example::run_example().expect("full_pipeline example should run");
}

#[allow(dead_code)]
mod http_backend_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/http_backend.rs"));
}

#[test]
fn http_backend_example_runs() {
    http_backend_example::run_example().expect("http_backend example should run");
}
