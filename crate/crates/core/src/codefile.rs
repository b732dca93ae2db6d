//! Code files.
//!
//! JSON: `{"n": 3, "r": 1, "words": ["111", "011", "100"]}` with coordinate 1
//! leftmost in every bitstring. Plain text: a first line `n R` (R may be `-`)
//! followed by one bitstring per line; blank lines and `#` comments are skipped.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cube::{check_dim, Code, Codeword};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct CodeFile {
    n: u32,
    r: Option<u32>,
    words: Vec<String>,
}

pub fn to_bitstring(w: Codeword, n: u32) -> String {
    (0..n)
        .map(|i| if w.0 >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_bitstring(s: &str, n: u32) -> Result<Codeword> {
    if s.chars().count() != n as usize {
        return Err(Error::Parse(format!(
            "word {s:?} has length {}, expected {n}",
            s.chars().count()
        )));
    }
    let mut v = 0u64;
    for (i, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => v |= 1 << i,
            other => {
                return Err(Error::Parse(format!(
                    "invalid character {other:?} in word {s:?}"
                )))
            }
        }
    }
    Ok(Codeword(v))
}

/// Parses bitstrings into a code, warning once about duplicates.
pub fn parse_words<S: AsRef<str>>(n: u32, words: &[S]) -> Result<Code> {
    check_dim(n)?;
    let parsed = words
        .iter()
        .map(|s| parse_bitstring(s.as_ref(), n))
        .collect::<Result<Vec<_>>>()?;
    let code = Code::new(n, parsed.iter().copied())?;
    if code.len() != parsed.len() {
        log::warn!(
            "dropped {} duplicate codeword(s)",
            parsed.len() - code.len()
        );
    }
    Ok(code)
}

pub fn from_json(text: &str) -> Result<Code> {
    let file: CodeFile = serde_json::from_str(text)?;
    let code = parse_words(file.n, &file.words)?;
    Ok(match file.r {
        Some(r) => code.with_radius(r),
        None => code,
    })
}

pub fn from_plaintext(text: &str) -> Result<Code> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty code file".into()))?;
    let mut fields = header.split_whitespace();
    let n: u32 = fields
        .next()
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad header line {header:?}")))?;
    let r = match fields.next() {
        None | Some("-") => None,
        Some(f) => Some(
            f.parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad radius in header {header:?}")))?,
        ),
    };
    let words: Vec<&str> = lines.collect();
    let code = parse_words(n, &words)?;
    Ok(match r {
        Some(r) => code.with_radius(r),
        None => code,
    })
}

/// Detects the format from the first non-blank character.
pub fn parse(text: &str) -> Result<Code> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        from_plaintext(text)
    }
}

pub fn to_json(code: &Code) -> String {
    let file = CodeFile {
        n: code.n(),
        r: code.radius(),
        words: code.iter().map(|w| to_bitstring(w, code.n())).collect(),
    };
    serde_json::to_string_pretty(&file).expect("code file serializes")
}

pub fn to_plaintext(code: &Code) -> String {
    let mut out = match code.radius() {
        Some(r) => format!("{} {}\n", code.n(), r),
        None => format!("{} -\n", code.n()),
    };
    for w in code.iter() {
        out.push_str(&to_bitstring(w, code.n()));
        out.push('\n');
    }
    out
}

pub fn read(path: &Path) -> Result<Code> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn write_json(path: &Path, code: &Code) -> Result<()> {
    std::fs::write(path, to_json(code) + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn coordinate_one_is_leftmost() {
        assert_eq!(to_bitstring(Codeword(0b001), 3), "100");
        assert_eq!(parse_bitstring("011", 3).unwrap(), Codeword(0b110));
    }

    #[test]
    fn rejects_bad_words() {
        assert!(parse_bitstring("01", 3).is_err());
        assert!(parse_bitstring("0a1", 3).is_err());
        assert!(from_json(r#"{"n":3,"r":1,"words":["0101"]}"#).is_err());
        assert!(from_plaintext("3 1\n012\n").is_err());
        assert!(from_plaintext("").is_err());
    }

    #[test]
    fn formats_agree() {
        let a = parse(r#"{"n": 3, "r": 1, "words": ["111", "011", "100", "111"]}"#).unwrap();
        let b = parse("# diagonal\n3 1\n111\n011\n\n100\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        assert_eq!(a.radius(), Some(1));
        let c = parse("3 -\n111\n").unwrap();
        assert_eq!(c.radius(), None);
    }

    proptest! {
        #[test]
        fn json_and_text_roundtrip(n in 1u32..20, raw in prop::collection::vec(any::<u64>(), 0..40), r in proptest::option::of(0u32..20)) {
            let mask = crate::cube::full_mask(n);
            let mut code = Code::new(n, raw.into_iter().map(|w| w & mask)).unwrap();
            if let Some(r) = r { code = code.with_radius(r); }
            prop_assert_eq!(&parse(&to_json(&code)).unwrap(), &code);
            prop_assert_eq!(&parse(&to_plaintext(&code)).unwrap(), &code);
        }
    }
}
