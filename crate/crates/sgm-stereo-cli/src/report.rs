//! Stable-ordered report documents, rendered as `key=value` lines or JSON.

use std::fmt::Write;

/// How a report document is printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    /// One `key=value` line per field.
    Text,
    /// A single JSON object with the same field names and order.
    #[value(name = "json-like", alias = "json")]
    JsonLike,
}

enum Value {
    Float(f64),
    Int(u64),
}

/// An ordered list of named values; fields print exactly in insertion order.
pub struct Report {
    fields: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Self { fields: Vec::new() }
    }

    pub fn float(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.fields.push((key.into(), Value::Float(value)));
        self
    }

    pub fn int(&mut self, key: impl Into<String>, value: u64) -> &mut Self {
        self.fields.push((key.into(), Value::Int(value)));
        self
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Text => {
                let mut out = String::new();
                for (key, value) in &self.fields {
                    match value {
                        Value::Float(v) => writeln!(out, "{key}={v:.6}").unwrap(),
                        Value::Int(v) => writeln!(out, "{key}={v}").unwrap(),
                    }
                }
                out
            }
            ReportFormat::JsonLike => {
                let mut out = String::from("{\n");
                for (i, (key, value)) in self.fields.iter().enumerate() {
                    let comma = if i + 1 < self.fields.len() { "," } else { "" };
                    match value {
                        Value::Float(v) => writeln!(out, "  \"{key}\": {v:.6}{comma}").unwrap(),
                        Value::Int(v) => writeln!(out, "  \"{key}\": {v}{comma}").unwrap(),
                    }
                }
                out.push_str("}\n");
                out
            }
        }
    }
}

/// Appends the standard timing/throughput fields of a pipeline run.
pub fn push_stats(report: &mut Report, stats: &sgm_stereo::PipelineStats) {
    report
        .float("mde_per_s", stats.mde_per_s)
        .float("fps", stats.fps)
        .float("time_total_s", stats.time_total_s)
        .float("time_cost_s", stats.time_cost_s)
        .float("time_aggregate_s", stats.time_aggregate_s)
        .float("time_post_s", stats.time_post_s);
}

/// Appends the standard accuracy fields of an evaluation.
pub fn push_eval(report: &mut Report, eval: &sgm_stereo::metrics::EvalReport) {
    report
        .float("d1_all_est", eval.d1_all_est)
        .float("d1_all_all", eval.d1_all_all)
        .float("bad_0_5", eval.bad_0_5)
        .float("bad_1", eval.bad_1)
        .float("bad_2", eval.bad_2)
        .float("bad_4", eval.bad_4)
        .float("density", eval.density)
        .int("count_gt_valid", eval.gt_valid_count as u64)
        .int("count_est_valid", eval.est_valid_count as u64)
        .int("count_evaluated_est", eval.evaluated_est_count as u64)
        .int("count_total_pixels", eval.total_pixels as u64);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_keep_field_order() {
        let mut r = Report::new();
        r.float("alpha", 0.25).int("beta", 7).float("gamma", 1.0);
        assert_eq!(
            r.render(ReportFormat::Text),
            "alpha=0.250000\nbeta=7\ngamma=1.000000\n"
        );
        assert_eq!(
            r.render(ReportFormat::JsonLike),
            "{\n  \"alpha\": 0.250000,\n  \"beta\": 7,\n  \"gamma\": 1.000000\n}\n"
        );
    }
}
