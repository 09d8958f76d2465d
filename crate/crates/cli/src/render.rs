use ulrich_core::classifier::ClassificationRow;
use ulrich_core::ring::CohClass;
use ulrich_core::spinor::NuRow;
use ulrich_core::BundleClass;

/// Markdown table with cells padded to at least `width`.
pub fn table(header: &[&str], rows: &[Vec<String>], width: usize) -> String {
    let pad = |s: &str| format!("{s:<width$}");
    let mut out = String::new();
    let head: Vec<String> = header.iter().map(|h| pad(h)).collect();
    out.push_str(&format!("| {} |\n", head.join(" | ")));
    let rule: Vec<String> = header.iter().map(|_| "-".repeat(width.max(3))).collect();
    out.push_str(&format!("|{}|\n", rule.iter().map(|r| format!(" {r} ")).collect::<Vec<_>>().join("|")));
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| pad(c)).collect();
        out.push_str(&format!("| {} |\n", cells.join(" | ")));
    }
    out
}

pub fn chern_table(bundle: &BundleClass, width: usize) -> String {
    let rows: Vec<Vec<String>> = (0..=bundle.dim())
        .map(|i| vec![i.to_string(), bundle.c(i).to_string()])
        .collect();
    format!(
        "rank {} on {}\n\n{}",
        bundle.rank(),
        bundle.ring().descriptor(),
        table(&["i", "c_i"], &rows, width)
    )
}

pub fn class_table(label: &str, x: &CohClass, width: usize) -> String {
    let rows: Vec<Vec<String>> = (0..=x.ring().dim())
        .map(|d| (d, x.component(d)))
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, c)| vec![d.to_string(), c.to_string()])
        .collect();
    format!("{label} on {}\n\n{}", x.descriptor(), table(&["codegree", "component"], &rows, width))
}

pub fn nu_table(rows: &[NuRow], width: usize) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.n.to_string(), r.rank.to_string(), r.nu.to_string()])
        .collect();
    table(&["n", "rank", "nu"], &body, width)
}

pub fn classification(rows: &[ClassificationRow], width: usize) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let witness: Vec<String> = r.witness.iter().map(ToString::to_string).collect();
            vec![
                r.n.to_string(),
                r.model().to_string(),
                r.rank.to_string(),
                r.nu.to_string(),
                r.big.to_string(),
                format!("[{}]", witness.join(", ")),
            ]
        })
        .collect();
    table(&["n", "model", "rank", "nu", "big", "witness"], &body, width)
}
