//! Prompt templates for the evaluator, the query proposer, the sibling-free
//! reflection proposer and the answer reader.
//!
//! All renderers are pure: identical arguments give identical bytes. Values
//! are spliced in literally with no escaping, so tag-like text inside a
//! document reaches the model untouched.

use std::fmt::Write;

use crate::corpus::{Corpus, Document, Question};
use crate::tree::Observation;

/// The additive five-point rubric substituted into the evaluator prompt.
pub const FIVE_POINT_RUBRIC: &str = "\
- Add 1 point if the knowledge is relevant and provides some information related to the user's inquiry, even if it is incomplete or contains some irrelevant content.
- Add another point if the knowledge addresses a substantial portion of the user’s question, but does not completely resolve the query or provide a direct answer.
- Award a third point if the response answers the basic elements of the user’s question in a useful way, regardless of whether it seems to have been written by an AI Assistant or if it has elements typically found in blogs or search results.
- Grant a fourth point if the knowledge addresses the user’s question directly and comprehensively, even if there is slight room for improvement in clarity, conciseness, or focus.
- Bestow a fifth point for knowledge that is impeccably tailored to the user’s question, without extraneous information, reflecting expert knowledge, and can be used to produce a high-quality, engaging, and insightful answer.";

const EVAL_INTRO: &str = "You are a medical expert. Review the user's question and rate the corresponding retrieved knowledge using the additive 5-point scoring system described below. Points are accumulated based on the satisfaction of each criterion:";

const EVAL_OUTRO: &str = "\
After examining the user’s instruction and the response:
-Briefly justify your total score, up to 100 words. Remember to assess from the AI Assistant perspective, utilizing web search knowledge as necessary. To evaluate the response in alignment with this additive scoring model, we’ll systematically attribute points based on the outlined criteria.
-Give suggestions for constructing better queries up to 100 words.

Conclude with a score between 0 and 5, strictly using the aforementioned additive 5-point scoring system and the format: “<score> Integer Score </score>”. For example, <score>3</score>.";

const PROPOSER_TASK: &str = "\
You are given the BM25 retriever as the search tool. According to previous query proposals and proposals' corresponding feedback and suggestions, give one single better query for the retriever to further search for extra information needed for answering the given question.";

const PROPOSER_OUTRO: &str = "\
After examining the information above, justify your decision, in up to 100 words.

Hints:
1. Use simple keywords as queries if no information is retrieved.
2. You can take one step at a time, subdivide the original question, and search for information on the sub-questions.

Conclude with the query for the paper abstracts using the format: \"<query> Query Here </query>\".";

const ANSWER_TEMPLATE_HEAD: &str = "\
You are an expert in the field of biomedical science.

Below is an instruction that describes a task, paired with an input that provides further context. Write a response that appropriately completes the request.

### Instruction:
";

fn numbered_lines(out: &mut String, items: impl IntoIterator<Item = impl AsRef<str>>) {
    for (i, item) in items.into_iter().enumerate() {
        let _ = writeln!(out, "{}. {}", i + 1, item.as_ref());
    }
}

fn numbered_inline(items: impl IntoIterator<Item = impl AsRef<str>>) -> String {
    items
        .into_iter()
        .enumerate()
        .map(|(i, item)| format!("{}. {}", i + 1, item.as_ref()))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Evaluator prompt over `docs`, numbered in the given order.
pub fn render_eval_prompt(question: &Question, docs: &[&Document]) -> String {
    let mut out = String::new();
    out.push_str(EVAL_INTRO);
    out.push('\n');
    out.push_str(FIVE_POINT_RUBRIC);
    out.push_str("\n\n");
    let _ = writeln!(out, "<question> {} </question>", question.text);
    out.push_str("<retrieved_knowledge>\n");
    numbered_lines(&mut out, docs.iter().map(|d| d.text.as_str()));
    out.push_str("</retrieved_knowledge>\n\n");
    out.push_str(EVAL_OUTRO);
    out
}

fn push_proposer_head(out: &mut String, question: &Question) {
    out.push_str("You are a medical expert, and you are tasked with searching for as much useful knowledge from a database of medical paper abstracts as possible to address the user’s question. The question is stated as follows: ");
    out.push_str(&question.text);
    out.push_str("\n\n");
    out.push_str(PROPOSER_TASK);
    out.push_str("\n\n");
}

fn push_retrieved_info(out: &mut String, obs: &Observation, corpus: &Corpus) {
    let docs = obs
        .ancestor_docs
        .iter()
        .filter_map(|id| corpus.get(id))
        .map(|d| d.text.as_str());
    out.push_str("Information already known is as follows:<retrieved_info>\n");
    let _ = writeln!(
        out,
        "    Query and its reasoning for Abstracts: {}",
        numbered_inline(&obs.ancestor_queries)
    );
    let _ = writeln!(out, "    Retrieved Abstracts: {}", numbered_inline(docs));
    out.push_str("</retrieved_info>\n\n");
    out.push_str(PROPOSER_OUTRO);
}

/// Query proposer prompt with sibling proposals and their feedback.
///
/// `corpus` resolves the observation's ancestor document ids to abstracts.
pub fn render_query_prompt(question: &Question, obs: &Observation, corpus: &Corpus) -> String {
    let mut out = String::new();
    push_proposer_head(&mut out, question);
    out.push_str("<query_proposal>\n");
    for (i, (q, f)) in obs
        .sibling_queries
        .iter()
        .zip(&obs.sibling_feedback)
        .enumerate()
    {
        let _ = writeln!(out, "{}. {}    Corresponding Feedback: {}", i + 1, q, f);
    }
    out.push_str("</query_proposal>\n\n");
    push_retrieved_info(&mut out, obs, corpus);
    out
}

/// The self-reflection variant of the proposer prompt: no sibling block.
pub fn render_reflect_prompt(question: &Question, obs: &Observation, corpus: &Corpus) -> String {
    let mut out = String::new();
    push_proposer_head(&mut out, question);
    push_retrieved_info(&mut out, obs, corpus);
    out
}

/// Reader prompt; `docs` are joined by blank lines into the input section.
pub fn render_answer_prompt(question: &Question, docs: &[&Document]) -> String {
    let context = docs
        .iter()
        .map(|d| d.text.as_str())
        .collect::<Vec<_>>()
        .join("\n\n");
    format!(
        "{ANSWER_TEMPLATE_HEAD}{}\n\n### Input:\n{}\n\n### Response:\n",
        question.text, context
    )
}
