//! Occupation-vector files:
//!
//! ```text
//! N 4
//! d 4
//! 2S 2
//! 2M 2        # optional, defaults to 2S
//! lambda 2 1 1 0
//! lambda 1.9 1.05 0.95 1/10
//! ```
//!
//! Entries are decimals or fractions and are read exactly. Several `lambda`
//! lines form a batch.

use spin_gpc::rational::parse_rational;
use spin_gpc::{Error, Result, Setting, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct VectorFile {
    pub setting: Setting,
    /// `(line, values)` per `lambda` line.
    pub vectors: Vec<(usize, Vec<Q>)>,
}

/// Whitespace-separated tokens with 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, byte)),
            (true, Some((c, b))) => {
                out.push((c, &line[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &line[b..]));
    }
    out
}

pub fn parse_vector_file(text: &str) -> Result<VectorFile> {
    let mut header: [Option<i64>; 4] = [None; 4];
    let mut vectors = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks = tokens(body);
        let Some(&(col0, key)) = toks.first() else { continue };
        let slot = match key {
            "N" => Some(0),
            "d" => Some(1),
            "2S" => Some(2),
            "2M" => Some(3),
            "lambda" => None,
            other => return Err(Error::parse(ln, col0, format!("unknown keyword \"{other}\""))),
        };
        if let Some(slot) = slot {
            if toks.len() != 2 {
                return Err(Error::parse(ln, col0, format!("expected `{key} <integer>`")));
            }
            let (col, tok) = toks[1];
            let value: i64 = tok
                .parse()
                .map_err(|_| Error::parse(ln, col, format!("invalid integer \"{tok}\"")))?;
            if header[slot].replace(value).is_some() {
                return Err(Error::parse(ln, col0, format!("duplicate `{key}` line")));
            }
            continue;
        }
        let mut values = Vec::with_capacity(toks.len() - 1);
        for &(col, tok) in &toks[1..] {
            let x = parse_rational(tok).map_err(|e| {
                Error::parse(ln, col + e.column - 1, format!("invalid number \"{tok}\": {}", e.reason))
            })?;
            values.push(x);
        }
        vectors.push((ln, values));
    }
    let need = |slot: usize, name: &str| -> Result<i64> {
        header[slot].ok_or_else(|| Error::parse(1, 1, format!("missing `{name}` line")))
    };
    let (n, d, two_s) = (need(0, "N")?, need(1, "d")?, need(2, "2S")?);
    if n < 0 || d < 0 || two_s < 0 {
        return Err(Error::Invalid("N, d and 2S must be non-negative".into()));
    }
    let two_m = header[3].unwrap_or(two_s);
    let setting = Setting::new(n as u32, d as u32, two_s as u32, two_m as i32)?;
    if vectors.is_empty() {
        return Err(Error::Invalid("no `lambda` line".into()));
    }
    for (ln, v) in &vectors {
        if v.len() != setting.d() {
            return Err(Error::parse(
                *ln,
                1,
                format!("expected {} entries, got {}", setting.d(), v.len()),
            ));
        }
    }
    Ok(VectorFile { setting, vectors })
}

/// `N,d,2S` or `N,d,2S,2M`; `2M` defaults to `2S`.
pub fn parse_setting(text: &str) -> std::result::Result<Setting, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(format!("expected N,d,2S[,2M], got \"{text}\""));
    }
    let mut nums = Vec::new();
    for p in &parts {
        nums.push(p.parse::<i64>().map_err(|_| format!("invalid integer \"{p}\""))?);
    }
    if nums[..3].iter().any(|&x| x < 0) {
        return Err("N, d and 2S must be non-negative".into());
    }
    let two_m = nums.get(3).copied().unwrap_or(nums[2]);
    Setting::new(nums[0] as u32, nums[1] as u32, nums[2] as u32, two_m as i32).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use spin_gpc::rational::{q, qf};

    #[test]
    fn reads_headers_and_vectors() {
        let f = parse_vector_file("# x\nN 4\nd 4\n2S 2\nlambda 2 1 1 0\nlambda 1.5 1 1 1/2\n").unwrap();
        assert_eq!(f.setting, Setting::new(4, 4, 2, 2).unwrap());
        assert_eq!(f.vectors[0], (5, vec![q(2), q(1), q(1), q(0)]));
        assert_eq!(f.vectors[1].1[0], qf(3, 2));
    }

    #[test]
    fn reports_line_and_column() {
        let err = parse_vector_file("N 3\nd 3\n2S 1\nlambda 1 1.2.3 1\n").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (4, 13)),
            e => panic!("{e}"),
        }
        assert!(parse_vector_file("N 3\nd 3\nlambda 1 1 1\n").is_err());
        assert!(parse_vector_file("N 3\nd 3\n2S 1\nlambda 1 1\n").is_err());
    }

    #[test]
    fn setting_arguments() {
        assert_eq!(parse_setting("3,3,1").unwrap(), Setting::new(3, 3, 1, 1).unwrap());
        assert_eq!(parse_setting("4,4,2,0").unwrap(), Setting::new(4, 4, 2, 0).unwrap());
        assert!(parse_setting("4,4").is_err());
    }
}
