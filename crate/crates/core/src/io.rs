//! Plain-text file formats.
//!
//! * Dictionary: `n=<len> N=<alphabet size>`, then one word per line.
//! * Code: the dictionary header, a `d=<claimed min distance>` line, then
//!   one word per line.
//! * Received words: one per line, `e` marking an erasure.
//! * Noise profile: `n=<len>`, then `i p_f p_e` lines (1-based) and/or a
//!   `uniform p_f=<v> p_e=<v>` line that fills every unlisted position.
//! * Channel: `X=<inputs> Y=<outputs>`, then one whitespace-separated row of
//!   `p(y|x)` per input.
//!
//! Blank lines and lines starting with `#` are ignored everywhere.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::binary_channel::NoiseProfile;
use crate::conflict::Dmc;
use crate::error::{Error, Result};
use crate::scalar::Probability;
use crate::words::{Alphabet, Code, Dictionary, ReceivedWord, Word};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn key_values(line: usize, text: &str) -> Result<HashMap<String, String>> {
    text.split_whitespace()
        .map(|tok| {
            tok.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::parse(line, format!("expected key=value, found {tok:?}")))
        })
        .collect()
}

fn required<T: FromStr>(line: usize, map: &HashMap<String, String>, key: &str) -> Result<T> {
    let raw = map
        .get(key)
        .ok_or_else(|| Error::parse(line, format!("missing {key}=")))?;
    raw.parse()
        .map_err(|_| Error::parse(line, format!("cannot parse {key}={raw}")))
}

fn parse_words<'a>(
    alphabet: &Alphabet,
    n: usize,
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<Vec<Word>> {
    let mut seen: HashMap<Word, usize> = HashMap::new();
    let mut words = Vec::new();
    for (line, text) in lines {
        let word = alphabet
            .parse_word(text)
            .map_err(|e| Error::parse(line, e.to_string()))?;
        if word.len() != n {
            return Err(Error::parse(
                line,
                format!("word has length {}, header says n={n}", word.len()),
            ));
        }
        if let Some(first) = seen.insert(word.clone(), line) {
            return Err(Error::parse(
                line,
                format!("duplicate of the word on line {first}"),
            ));
        }
        words.push(word);
    }
    Ok(words)
}

fn word_header(line: usize, text: &str) -> Result<(usize, Alphabet)> {
    let kv = key_values(line, text)?;
    let n: usize = required(line, &kv, "n")?;
    let q: usize = required(line, &kv, "N")?;
    if n == 0 {
        return Err(Error::parse(line, "n must be positive"));
    }
    let alphabet = Alphabet::standard(q).map_err(|e| Error::parse(line, e.to_string()))?;
    Ok((n, alphabet))
}

pub fn parse_dictionary(text: &str) -> Result<Dictionary> {
    let mut lines = content_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header n=<len> N=<size>"))?;
    let (n, alphabet) = word_header(line, header)?;
    let words = parse_words(&alphabet, n, lines)?;
    Dictionary::new(alphabet, n, words)
}

pub fn write_dictionary(dict: &Dictionary) -> String {
    let mut out = format!("n={} N={}\n", dict.word_len(), dict.alphabet().size());
    for w in dict.iter() {
        out.push_str(&dict.alphabet().render_word(w));
        out.push('\n');
    }
    out
}

/// A code together with its claimed minimum distance.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeFile {
    pub code: Code,
    pub d: usize,
}

pub fn parse_code(text: &str) -> Result<CodeFile> {
    let mut lines = content_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header n=<len> N=<size>"))?;
    let (n, alphabet) = word_header(line, header)?;
    let (line, d_line) = lines
        .next()
        .ok_or_else(|| Error::parse(line + 1, "missing d=<distance> line"))?;
    let d: usize = required(line, &key_values(line, d_line)?, "d")?;
    let words = parse_words(&alphabet, n, lines)?;
    let code = Code::new(alphabet, n, words)?;
    Ok(CodeFile { code, d })
}

/// Renders a code file; `notes` become `#` comment lines after the header.
pub fn write_code(code: &Code, d: usize, notes: &[String]) -> String {
    let mut out = format!(
        "n={} N={}\nd={d}\n",
        code.word_len(),
        code.alphabet().size()
    );
    for note in notes {
        let _ = writeln!(out, "# {note}");
    }
    for w in code.words() {
        out.push_str(&code.alphabet().render_word(w));
        out.push('\n');
    }
    out
}

pub fn parse_received(text: &str, alphabet: &Alphabet, n: usize) -> Result<Vec<ReceivedWord>> {
    content_lines(text)
        .map(|(line, t)| {
            let y = alphabet
                .parse_received(t)
                .map_err(|e| Error::parse(line, e.to_string()))?;
            if y.len() != n {
                return Err(Error::parse(
                    line,
                    format!("received word has length {}, code has n={n}", y.len()),
                ));
            }
            Ok(y)
        })
        .collect()
}

fn parse_scalar<T: Probability + FromStr>(line: usize, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::parse(line, format!("cannot parse probability {raw:?}")))
}

pub fn parse_profile<T: Probability + FromStr>(text: &str) -> Result<NoiseProfile<T>> {
    let mut lines = content_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header n=<len>"))?;
    let n: usize = required(line, &key_values(line, header)?, "n")?;
    if n == 0 {
        return Err(Error::parse(line, "n must be positive"));
    }
    let mut uniform: Option<(T, T)> = None;
    let mut explicit: Vec<Option<(T, T)>> = vec![None; n];
    for (line, text) in lines {
        if let Some(rest) = text.strip_prefix("uniform") {
            if uniform.is_some() {
                return Err(Error::parse(line, "second uniform line"));
            }
            let kv = key_values(line, rest)?;
            let f = parse_scalar(line, kv.get("p_f").map_or("0", String::as_str))?;
            let e = parse_scalar(line, kv.get("p_e").map_or("0", String::as_str))?;
            uniform = Some((f, e));
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        let [i, f, e] = fields[..] else {
            return Err(Error::parse(line, "expected `i p_f p_e`"));
        };
        let i: usize = i
            .parse()
            .map_err(|_| Error::parse(line, format!("bad position {i:?}")))?;
        if i == 0 || i > n {
            return Err(Error::parse(
                line,
                format!("position {i} is outside 1..={n}"),
            ));
        }
        if explicit[i - 1].is_some() {
            return Err(Error::parse(line, format!("position {i} listed twice")));
        }
        explicit[i - 1] = Some((parse_scalar(line, f)?, parse_scalar(line, e)?));
    }
    let mut p_f = Vec::with_capacity(n);
    let mut p_e = Vec::with_capacity(n);
    for (i, slot) in explicit.into_iter().enumerate() {
        let (f, e) = slot
            .or_else(|| uniform.clone())
            .ok_or_else(|| Error::parse(0, format!("position {} has no probabilities", i + 1)))?;
        p_f.push(f);
        p_e.push(e);
    }
    NoiseProfile::new(p_f, p_e)
}

pub fn write_profile<T: Probability + std::fmt::Display>(profile: &NoiseProfile<T>) -> String {
    let mut out = format!("n={}\n", profile.len());
    for (i, (f, e)) in profile.p_f().iter().zip(profile.p_e()).enumerate() {
        let _ = writeln!(out, "{} {f} {e}", i + 1);
    }
    out
}

pub fn parse_channel<T: Probability + FromStr>(text: &str) -> Result<Dmc<T>> {
    let mut lines = content_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header X=<inputs> Y=<outputs>"))?;
    let kv = key_values(line, header)?;
    let inputs: usize = required(line, &kv, "X")?;
    let outputs: usize = required(line, &kv, "Y")?;
    let mut rows = Vec::with_capacity(inputs);
    for (line, text) in lines {
        let row = text
            .split_whitespace()
            .map(|tok| parse_scalar(line, tok))
            .collect::<Result<Vec<T>>>()?;
        if row.len() != outputs {
            return Err(Error::parse(
                line,
                format!("row has {} entries, header says Y={outputs}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != inputs {
        return Err(Error::parse(
            0,
            format!("found {} rows, header says X={inputs}", rows.len()),
        ));
    }
    Dmc::new(rows)
}

pub fn write_channel<T: Probability + std::fmt::Display>(channel: &Dmc<T>) -> String {
    let mut out = format!("X={} Y={}\n", channel.inputs(), channel.outputs());
    for row in channel.rows() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}
