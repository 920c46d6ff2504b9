//! Deterministic rendering: identical config gives byte-identical output.

use clap::ValueEnum;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// A number with the requested count of significant digits, in scientific
/// notation so the rendering never depends on magnitude.
pub fn format_sig(x: f64, digits: usize) -> String {
    format!("{:.*e}", digits.saturating_sub(1), x)
}

/// One evaluation with its reproducibility envelope.
pub struct EvalRecord {
    pub function: String,
    pub value: Complex64,
    pub method: String,
    pub terms_used: usize,
    pub tail_bound: f64,
    pub tol: f64,
    pub seed: u64,
}

impl EvalRecord {
    pub fn render(&self, format: OutputFormat, digits: usize) -> String {
        match format {
            OutputFormat::Json => format!(
                "{{\"function\":\"{}\",\"value\":{{\"re\":{},\"im\":{}}},\"method\":\"{}\",\"terms_used\":{},\"tail_bound\":{},\"tol\":{},\"seed\":{}}}",
                self.function,
                format_sig(self.value.re, digits),
                format_sig(self.value.im, digits),
                self.method,
                self.terms_used,
                format_sig(self.tail_bound, 3),
                format_sig(self.tol, 3),
                self.seed
            ),
            OutputFormat::Csv => format!(
                "function,value_re,value_im,method,terms_used,tail_bound,tol,seed\n{},{},{},{},{},{},{},{}",
                self.function,
                format_sig(self.value.re, digits),
                format_sig(self.value.im, digits),
                self.method,
                self.terms_used,
                format_sig(self.tail_bound, 3),
                format_sig(self.tol, 3),
                self.seed
            ),
        }
    }
}
