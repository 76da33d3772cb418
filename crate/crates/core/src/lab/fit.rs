use crate::error::{input, Error, Result};

/// A parsed CSV table; `#` lines are skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// Numeric value of `column` in `row`; names not in the header are looked
    /// up among the `key=value` pairs of a `params` column.
    pub fn value(&self, row: usize, column: &str) -> Result<f64> {
        let cells = &self.rows[row];
        let raw = match self.header.iter().position(|h| h == column) {
            Some(i) => cells[i].as_str(),
            None => {
                let pi = self
                    .header
                    .iter()
                    .position(|h| h == "params")
                    .ok_or_else(|| Error::Input(format!("no column `{column}`")))?;
                cells[pi]
                    .split(';')
                    .filter_map(|kv| kv.split_once('='))
                    .find(|(k, _)| *k == column)
                    .map(|(_, v)| v)
                    .ok_or_else(|| Error::Input(format!("row {} has no column or parameter `{column}`", row + 1)))?
            }
        };
        super::config::parse_number(column, raw)
    }

    /// Rows whose `column` equals `value` (textually, or numerically within 1e-12).
    pub fn filter(&self, column: &str, value: &str) -> Result<Table> {
        let mut rows = Vec::new();
        for i in 0..self.rows.len() {
            let keep = match (self.value(i, column), value.parse::<f64>()) {
                (Ok(a), Ok(b)) => (a - b).abs() <= 1e-12 * b.abs().max(1.0),
                _ => self.text(i, column).as_deref() == Some(value),
            };
            if keep {
                rows.push(self.rows[i].clone());
            }
        }
        Ok(Table {
            header: self.header.clone(),
            rows,
        })
    }

    fn text(&self, row: usize, column: &str) -> Option<String> {
        if let Some(i) = self.header.iter().position(|h| h == column) {
            return Some(self.rows[row][i].clone());
        }
        let pi = self.header.iter().position(|h| h == "params")?;
        self.rows[row][pi]
            .split(';')
            .filter_map(|kv| kv.split_once('='))
            .find(|(k, _)| *k == column)
            .map(|(_, v)| v.to_string())
    }
}

pub fn parse_table(text: &str) -> Result<Table> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Input("CSV has no header".into()))?
        .1
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (i, l) in lines {
        let cells: Vec<String> = l.split(',').map(|s| s.trim().to_string()).collect();
        if cells.len() != header.len() {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected {} cells, got {}", header.len(), cells.len()),
            });
        }
        rows.push(cells);
    }
    Ok(Table { header, rows })
}

/// Least-squares line through `(log x, log y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope (zero for two exact points or a perfect fit).
    pub slope_stderr: f64,
    /// Root mean square of the log residuals.
    pub residual_rms: f64,
    pub n: usize,
}

pub fn fit_scaling(table: &Table, x: &str, y: &str) -> Result<ScalingFit> {
    let n = table.rows.len();
    if n < 4 {
        return input(format!("a scaling fit needs at least 4 rows, got {n}"));
    }
    let mut pts = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (table.value(i, x)?, table.value(i, y)?);
        if !(a > 0.0 && b > 0.0) {
            return input(format!("row {}: log-log fit needs positive values, got {x}={a}, {y}={b}", i + 1));
        }
        pts.push((a.ln(), b.ln()));
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return input(format!("column `{x}` is constant"));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(ScalingFit {
        slope,
        intercept,
        slope_stderr: (sse / (nf - 2.0) / sxx).sqrt(),
        residual_rms: (sse / nf).sqrt(),
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(points: &[(f64, f64)]) -> Table {
        let mut text = String::from("# anchor: test\nx,y\n");
        for (a, b) in points {
            text.push_str(&format!("{a},{b}\n"));
        }
        parse_table(&text).unwrap()
    }

    #[test]
    fn exact_power_and_constant() {
        let t = table(&[(1.0, 3.0), (2.0, 12.0), (4.0, 48.0), (8.0, 192.0)]);
        let f = fit_scaling(&t, "x", "y").unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && f.residual_rms < 1e-12);
        let c = fit_scaling(&table(&[(1.0, 5.0), (2.0, 5.0), (3.0, 5.0), (4.0, 5.0)]), "x", "y").unwrap();
        assert!(c.slope.abs() < 1e-12);
    }

    #[test]
    fn rejects_short_and_nonpositive() {
        assert!(fit_scaling(&table(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]), "x", "y").is_err());
        assert!(fit_scaling(&table(&[(1.0, 1.0), (2.0, 0.0), (3.0, 3.0), (4.0, 1.0)]), "x", "y").is_err());
    }

    #[test]
    fn params_columns_and_filter() {
        let t = parse_table("experiment,params,v\ne,p=0.5;m=16,1\ne,p=1;m=32,2\n").unwrap();
        assert_eq!(t.value(1, "m").unwrap(), 32.0);
        assert_eq!(t.filter("p", "0.5").unwrap().rows.len(), 1);
    }
}
