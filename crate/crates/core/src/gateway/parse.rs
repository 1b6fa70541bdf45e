//! Extraction of tagged values from model completions. The last well-formed
//! tag wins.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCORE_OPEN: &str = "<score>";
pub const SCORE_CLOSE: &str = "</score>";
pub const QUERY_OPEN: &str = "<query>";
pub const QUERY_CLOSE: &str = "</query>";

pub const MAX_SCORE: u8 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalResult {
    pub score: u8,
    pub feedback: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryProposal {
    pub query: String,
    pub rationale: String,
}

fn parse_integer(inner: &str) -> Option<i64> {
    let s = inner.trim();
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    // Saturate on overflow; the value is clamped afterwards anyway.
    Some(s.parse::<i64>().unwrap_or(if s.starts_with('-') { i64::MIN } else { i64::MAX }))
}

/// Reads the evaluator's score from the last `<score>N</score>` span.
///
/// Out-of-range integers are clamped to 0..=5. The feedback is the whole
/// completion with that one span removed.
pub fn parse_score_feedback(text: &str) -> Result<EvalResult> {
    let mut search_end = text.len();
    while let Some(open) = text[..search_end].rfind(SCORE_OPEN) {
        let inner_start = open + SCORE_OPEN.len();
        if let Some(rel) = text[inner_start..].find(SCORE_CLOSE) {
            let inner_end = inner_start + rel;
            if let Some(value) = parse_integer(&text[inner_start..inner_end]) {
                let score = value.clamp(0, MAX_SCORE as i64) as u8;
                let span_end = inner_end + SCORE_CLOSE.len();
                let feedback = format!("{}{}", &text[..open], &text[span_end..]);
                return Ok(EvalResult { score, feedback });
            }
        }
        search_end = open;
    }
    Err(Error::Parse("no <score>integer</score> tag in evaluator reply".into()))
}

/// Reads the proposed query from the last complete `<query>…</query>` span.
pub fn parse_query(text: &str) -> Result<QueryProposal> {
    let close = text
        .rfind(QUERY_CLOSE)
        .ok_or_else(|| Error::Parse("no </query> tag in proposer reply".into()))?;
    let open = text[..close]
        .rfind(QUERY_OPEN)
        .ok_or_else(|| Error::Parse("no <query> tag before </query>".into()))?;
    let query = text[open + QUERY_OPEN.len()..close].trim();
    if query.is_empty() {
        return Err(Error::Parse("empty <query> span".into()));
    }
    Ok(QueryProposal {
        query: query.to_string(),
        rationale: text.to_string(),
    })
}
