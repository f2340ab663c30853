//! Locale-free number formatting shared by every CSV writer.

/// Scientific notation with 17 significant digits; round-trips through `parse::<f64>()`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_line<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut line = fields
        .into_iter()
        .map(|s| s.as_ref().to_owned())
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}
