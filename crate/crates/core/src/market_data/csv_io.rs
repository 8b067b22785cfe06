use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;

use super::{DataError, PriceSeries};

/// Infers the sampling frequency from the median calendar spacing.
///
/// Up to 3 days is business-daily (252), up to 10 weekly (52), up to 45
/// monthly (12), up to 120 quarterly (4), anything sparser annual.
pub fn infer_periods_per_year(dates: &[NaiveDate]) -> u32 {
    let mut gaps: Vec<i64> = dates.windows(2).map(|w| (w[1] - w[0]).num_days()).collect();
    if gaps.is_empty() {
        return 252;
    }
    gaps.sort_unstable();
    let n = gaps.len();
    let median = if n % 2 == 1 { gaps[n / 2] as f64 } else { 0.5 * (gaps[n / 2 - 1] + gaps[n / 2]) as f64 };
    match median {
        m if m <= 3.0 => 252,
        m if m <= 10.0 => 52,
        m if m <= 45.0 => 12,
        m if m <= 120.0 => 4,
        _ => 1,
    }
}

/// Loads a `date,price` CSV file. The contract id is the file stem.
pub fn load_csv(path: impl AsRef<Path>, periods_per_year: Option<u32>) -> Result<PriceSeries, DataError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| DataError::Io { path: path.display().to_string(), source })?;
    let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    read_csv(file, id, periods_per_year)
}

/// Parses `date,price` CSV from any reader. Error line numbers count the header as line 1.
pub fn read_csv<R: Read>(
    reader: R,
    contract_id: impl Into<String>,
    periods_per_year: Option<u32>,
) -> Result<PriceSeries, DataError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(reader);

    let mut dates: Vec<NaiveDate> = Vec::new();
    let mut prices = Vec::new();
    let mut seen_header = false;
    for (idx, rec) in rdr.records().enumerate() {
        let fallback_line = idx + 1;
        let rec = rec.map_err(|e| DataError::MalformedRow {
            line: e.position().map_or(fallback_line, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let line = rec.position().map_or(fallback_line, |p| p.line() as usize);
        if !seen_header {
            let header: Vec<&str> = rec.iter().collect();
            let first = header.first().map(|s| s.trim_start_matches('\u{feff}'));
            if header.len() != 2 || first != Some("date") || header[1] != "price" {
                return Err(DataError::BadHeader { line, found: header.join(",") });
            }
            seen_header = true;
            continue;
        }
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != 2 {
            return Err(DataError::MalformedRow { line, reason: format!("expected 2 fields, found {}", rec.len()) });
        }
        let date: NaiveDate =
            rec[0].parse().map_err(|e| DataError::MalformedRow { line, reason: format!("bad date `{}`: {e}", &rec[0]) })?;
        let price: f64 =
            rec[1].parse().map_err(|e| DataError::MalformedRow { line, reason: format!("bad price `{}`: {e}", &rec[1]) })?;
        if !price.is_finite() {
            return Err(DataError::MalformedRow { line, reason: format!("non-finite price `{}`", &rec[1]) });
        }
        if price <= 0.0 {
            return Err(DataError::NonPositivePrice { line, price });
        }
        if let Some(prev) = dates.last() {
            if date <= *prev {
                return Err(DataError::NonIncreasingDates { line, date });
            }
        }
        dates.push(date);
        prices.push(price);
    }
    if !seen_header {
        return Err(DataError::BadHeader { line: 1, found: String::new() });
    }
    if dates.is_empty() {
        return Err(DataError::Empty);
    }
    let ppy = periods_per_year.unwrap_or_else(|| infer_periods_per_year(&dates));
    PriceSeries::new(contract_id, dates, prices, ppy)
}

/// Writes a series as `date,price` with round-trip exact decimal prices.
pub fn write_csv<W: std::io::Write>(series: &PriceSeries, out: W) -> Result<(), DataError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| DataError::Invalid(format!("write failed: {e}"));
    w.write_record(["date", "price"]).map_err(io)?;
    for (d, p) in series.dates().iter().zip(series.prices()) {
        w.write_record([d.format("%Y-%m-%d").to_string(), p.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| DataError::Invalid(format!("write failed: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<PriceSeries, DataError> {
        read_csv(text.as_bytes(), "t", None)
    }

    #[test]
    fn minimal_daily_file() {
        let s = parse("date,price\n2020-01-02,100.0\n2020-01-03,101.5\n").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.periods_per_year(), 252);
        assert_eq!(s.prices(), &[100.0, 101.5]);
    }

    #[test]
    fn crlf_and_trailing_blank_lines() {
        let s = parse("date,price\r\n2020-01-02,100.0\r\n2020-01-03,101.5\r\n\r\n").unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn decreasing_dates_name_the_offending_line() {
        let err = parse("date,price\n2020-01-03,100\n2020-01-02,101\n").unwrap_err();
        assert!(matches!(err, DataError::NonIncreasingDates { line: 3, .. }), "{err:?}");
        assert!(err.to_string().contains("line 3"));
    }

    #[test]
    fn negative_price_is_its_own_error() {
        let err = parse("date,price\n2020-01-02,-5\n").unwrap_err();
        assert!(matches!(err, DataError::NonPositivePrice { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn malformed_rows_report_line_numbers() {
        let err = parse("date,price\n2020-01-02,100\n2020-13-01,100\n").unwrap_err();
        assert!(matches!(err, DataError::MalformedRow { line: 3, .. }), "{err:?}");
        let err = parse("date,price\n2020-01-02,abc\n").unwrap_err();
        assert!(matches!(err, DataError::MalformedRow { line: 2, .. }), "{err:?}");
        let err = parse("date,price\n2020-01-02,1,2\n").unwrap_err();
        assert!(matches!(err, DataError::MalformedRow { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn header_is_required() {
        assert!(matches!(parse("2020-01-02,100\n").unwrap_err(), DataError::BadHeader { line: 1, .. }));
        assert!(matches!(parse("").unwrap_err(), DataError::BadHeader { .. }));
        assert!(matches!(parse("date,price\n").unwrap_err(), DataError::Empty));
    }

    #[test]
    fn missing_file() {
        let err = load_csv("/definitely/not/here.csv", None).unwrap_err();
        assert!(matches!(err, DataError::Io { .. }));
    }

    #[test]
    fn frequency_inference() {
        let d = |s: &str| s.parse::<NaiveDate>().unwrap();
        assert_eq!(infer_periods_per_year(&[d("2020-01-03"), d("2020-01-06"), d("2020-01-07")]), 252);
        assert_eq!(infer_periods_per_year(&[d("2020-01-03"), d("2020-01-10"), d("2020-01-17")]), 52);
        assert_eq!(infer_periods_per_year(&[d("2020-01-31"), d("2020-02-29"), d("2020-03-31")]), 12);
        assert_eq!(infer_periods_per_year(&[d("1700-01-01")]), 252);
    }

    #[test]
    fn override_beats_inference() {
        let s = read_csv("date,price\n2020-01-02,1\n2020-01-03,2\n".as_bytes(), "t", Some(12)).unwrap();
        assert_eq!(s.periods_per_year(), 12);
    }
}
