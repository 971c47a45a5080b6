//! Prompt templates.
//!
//! Every template is rendered in a single pass: substituted values are never
//! re-scanned for placeholders, so braces inside an intent or a document are
//! inserted literally.

pub const TEXT_SUMMARY: &str = "You are an assistant tasked with summarizing text. Give a concise summary of the text {text} and a title to it. Please provide the summary in a string format.";

pub const TABLE_SUMMARY: &str = "You are an assistant tasked with summarizing tables. Give a very concise summary about what is this table {table} about? Please provide the summary in a string format.";

pub const DOMAIN_INSTRUCTION: &str =
    "Please list all the service/traffic scenarios that can be provided to our customers";

/// Query-engine prompt used to derive the scenario catalog.
pub const CATALOG_QUERY: &str = "{instruction}. Answer using only the context information below, as a comma-separated list of scenario names.\nContext information:\n{context}";

pub const REFINEMENT: &str = "You are an expert network service provider who can predict the service/traffic scenario demanded by network users. Predict the most relevant service/traffic scenario requesting the following service demand \"{intent}\" from the following list [{catalog}]. Some examples are given below: intent: 4K On Demand Video. Service/traffic scenario: 4K On Demand Video. intent: I want internet access with fast browsing service in the airoplane. Service/traffic scenario: Airplanes connectivity. Write a clear and conscious output giving only the chosen service/traffic scenario. Do not put any introductory phrases, commentary, or explanations.";

/// Separator between catalog names inside the refinement prompt.
pub const CATALOG_SEPARATOR: &str = "; ";

pub const GENERATION_CONTEXT: &str =
    "Provided the following context information\n{context}\nGiven only this information, ";

pub const GENERATION: &str = "Please provide the performance recommendations metrics and their values to the scenario \"{scenario}\" in the following format {format}. Some examples are given below: {example}";

pub const OUTPUT_FORMAT: &str = "Scenario Type: <scenario>, Key Performance Factors: <metric>: [<comparator>] <value> [<unit>] [(<qualifier>)], ...";

pub const FEW_SHOT_4K: &str = "Scenario Type: 4K On Demand Video, Key Performance Factors: Data Rate/Throughput (downlink): 30 Mbps, Delay: RTT < 100 ms, Packet Loss Rate: 10^-3, Resolution: 4K, Coverage Level CSI RSRP: -113 dBm, Coverage Quality CSI SINR: -2 dB.";

pub const RELEVANCE_JUDGE: &str = "Rate how relevant the following context is to the service/traffic scenario \"{scenario}\" on a scale from 0 to 10. Reply with the number only.\nContext:\n{context}";

pub const REVERSE_QUESTION: &str = "Write question number {n} that the following network intent answers. Reply with the question only.\n{answer}";

/// Marker phrases the mock model keys on.
pub mod markers {
    pub const TEXT_SUMMARY: &str = "tasked with summarizing text";
    pub const TEXT_SUMMARY_OPEN: &str = "Give a concise summary of the text ";
    pub const TEXT_SUMMARY_CLOSE: &str = " and a title to it.";
    pub const TABLE_SUMMARY: &str = "tasked with summarizing tables";
    pub const TABLE_SUMMARY_OPEN: &str = "what is this table ";
    pub const TABLE_SUMMARY_CLOSE: &str = " about?";
    pub const CLASSIFICATION: &str = "Predict the most relevant service/traffic scenario";
    pub const INTENT_OPEN: &str = "service demand \"";
    pub const INTENT_CLOSE: &str = "\" from the following list [";
    pub const CATALOG_CLOSE: &str = "]. Some examples are given below:";
    pub const GENERATION: &str = "performance recommendations metrics";
    pub const CONTEXT_OPEN: &str = "Provided the following context information";
    pub const CONTEXT_CLOSE: &str = "Given only this information";
    pub const SCENARIO_OPEN: &str = "to the scenario \"";
    pub const SCENARIO_CLOSE: &str = "\" in the following format";
}

/// Substitute `{name}` placeholders in one left-to-right pass. Unknown
/// placeholders are left as written.
pub fn render(template: &str, vars: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        match after.find('}') {
            Some(close) => {
                let name = &after[..close];
                match vars.iter().find(|(k, _)| *k == name) {
                    Some((_, v)) => out.push_str(v),
                    None => {
                        out.push('{');
                        out.push_str(name);
                        out.push('}');
                    }
                }
                rest = &after[close + 1..];
            }
            None => {
                out.push_str(&rest[open..]);
                rest = "";
            }
        }
    }
    out.push_str(rest);
    out
}

/// Text between the first `open` and the last `close` after it.
pub(crate) fn between<'a>(text: &'a str, open: &str, close: &str) -> Option<&'a str> {
    let start = text.find(open)? + open.len();
    let end = text[start..].rfind(close)? + start;
    Some(&text[start..end])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_is_single_pass() {
        let out = render("a {x} b {y}", &[("x", "{y}"), ("y", "Y")]);
        assert_eq!(out, "a {y} b Y");
    }

    #[test]
    fn render_keeps_unknown_and_unclosed() {
        assert_eq!(render("{z} and {", &[]), "{z} and {");
    }

    #[test]
    fn between_uses_last_close() {
        assert_eq!(between("x [a] b] y", "[", "]"), Some("a] b"));
        assert_eq!(between("nothing", "[", "]"), None);
    }
}
