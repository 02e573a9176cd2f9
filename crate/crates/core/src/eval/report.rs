use super::MeanMetrics;

/// One rendered row of the results table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub label: String,
    /// Percentages formatted to one decimal place.
    pub f1: String,
    pub average_precision: String,
    pub best_f1: bool,
    pub best_ap: bool,
}

impl TableRow {
    /// The unmarked `label | f1 | ap` form.
    pub fn plain(&self) -> String {
        format!("{} | {} | {}", self.label, self.f1, self.average_precision)
    }
}

fn percent(x: f64) -> String {
    format!("{:.1}", x * 100.0)
}

/// Format rows and flag the best value per column. Comparison is on the
/// rounded text, so values that print the same are all marked.
pub fn table_rows(rows: &[(String, MeanMetrics)]) -> Vec<TableRow> {
    let f1s: Vec<String> = rows.iter().map(|(_, m)| percent(m.f1)).collect();
    let aps: Vec<String> = rows
        .iter()
        .map(|(_, m)| percent(m.average_precision))
        .collect();
    let best = |col: &[String]| {
        col.iter()
            .filter_map(|s| s.parse::<f64>().ok())
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let (best_f1, best_ap) = (best(&f1s), best(&aps));
    rows.iter()
        .zip(f1s.into_iter().zip(aps))
        .map(|((label, _), (f1, ap))| TableRow {
            label: label.clone(),
            best_f1: f1.parse::<f64>().ok() == Some(best_f1),
            best_ap: ap.parse::<f64>().ok() == Some(best_ap),
            f1,
            average_precision: ap,
        })
        .collect()
}

/// Markdown table with the best value per column in bold.
pub fn report_table(rows: &[(String, MeanMetrics)]) -> String {
    let mark = |s: &str, best: bool| {
        if best {
            format!("**{s}**")
        } else {
            s.to_string()
        }
    };
    let mut out =
        String::from("| Training Set | F1 score(%) | Average Precision(%) |\n|---|---|---|\n");
    for r in table_rows(rows) {
        out.push_str(&format!(
            "| {} | {} | {} |\n",
            r.label,
            mark(&r.f1, r.best_f1),
            mark(&r.average_precision, r.best_ap)
        ));
    }
    out
}
