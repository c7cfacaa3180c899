//! Line-oriented text format for TBNs and configurations.
//!
//! TBN lines are `COUNT * LABEL: SITE ...`, where `COUNT *` and `LABEL:` are
//! optional. Configuration lines are `COUNT * { MONOMER ... }`, naming
//! monomers by label or, when unlabeled, by `(SITE ...)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Result, TbnError};
use crate::model::{Configuration, MonomerType, Polymer, SiteType, Tbn};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> TbnError {
    TbnError::Parse { line, column, message: message.into() }
}

/// A non-blank line with its comment removed.
struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn lines(text: &'a str) -> impl Iterator<Item = Line<'a>> {
        text.lines().enumerate().filter_map(|(i, raw)| {
            let text = raw.split('#').next().unwrap_or("");
            (!text.trim().is_empty()).then_some(Line { number: i + 1, text })
        })
    }

    /// Column where `at`, a slice of this line, starts.
    fn column(&self, at: &str) -> usize {
        let offset = at.as_ptr() as usize - self.text.as_ptr() as usize;
        self.text[..offset].chars().count() + 1
    }

    fn error(&self, rest: &str, message: impl Into<String>) -> TbnError {
        parse_error(self.number, self.column(rest), message)
    }

    /// Splits off an optional `COUNT *` prefix.
    fn count(&self) -> Result<(u32, &'a str)> {
        let rest = self.text.trim_start();
        let digits = rest.len() - rest.trim_start_matches(|c: char| c.is_ascii_digit()).len();
        if digits == 0 {
            return Ok((1, rest));
        }
        let after = rest[digits..].trim_start();
        let Some(after) = after.strip_prefix('*') else {
            return Ok((1, rest));
        };
        let count: u32 = rest[..digits].parse().map_err(|_| self.error(rest, "count is too large"))?;
        if count == 0 {
            return Err(self.error(rest, "count must be positive"));
        }
        Ok((count, after))
    }
}

/// Tokens separated by whitespace, each with the rest of the line it starts.
fn tokens(s: &str) -> impl Iterator<Item = (&str, &str)> {
    let mut rest = s;
    std::iter::from_fn(move || {
        rest = rest.trim_start();
        if rest.is_empty() {
            return None;
        }
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let (token, tail) = rest.split_at(end);
        let at = rest;
        rest = tail;
        Some((token, at))
    })
}

fn parse_sites(line: &Line<'_>, text: &str) -> Result<Vec<SiteType>> {
    tokens(text)
        .map(|(token, at)| {
            SiteType::from_str(token).map_err(|_| line.error(at, format!("invalid site {token:?}")))
        })
        .collect()
}

pub fn parse_tbn(text: &str) -> Result<Tbn> {
    let mut tbn = Tbn::new();
    let mut labels: BTreeMap<String, MonomerType> = BTreeMap::new();
    for line in Line::lines(text) {
        let (count, rest) = line.count()?;
        let (label, sites_text) = match rest.split_once(':') {
            Some((label, sites)) => {
                let label = label.trim();
                if label.is_empty() {
                    return Err(line.error(rest, "empty label before ':'"));
                }
                (Some(label), sites)
            }
            None => (None, rest),
        };
        let sites = parse_sites(&line, sites_text)?;
        if sites.is_empty() {
            return Err(line.error(sites_text, "monomer has no sites"));
        }
        let monomer = MonomerType::new(label, sites).map_err(|e| line.error(rest, e.to_string()))?;
        if let Some(l) = label {
            match labels.get(l) {
                Some(prev) if *prev != monomer => {
                    return Err(line.error(rest, format!("label {l:?} already names a different monomer")));
                }
                _ => {
                    labels.insert(l.to_string(), monomer.clone());
                }
            }
        }
        if let Some(existing) = tbn.monomer_types().find(|m| **m == monomer) {
            if existing.label() != monomer.label() {
                return Err(line.error(
                    rest,
                    format!(
                        "monomer {} repeats {} under another label",
                        monomer.display_name(),
                        existing.display_name()
                    ),
                ));
            }
        }
        tbn.add(monomer, count);
    }
    Ok(tbn)
}

/// Non-fatal problems worth reporting after a parse.
pub fn tbn_warnings(tbn: &Tbn) -> Vec<String> {
    match tbn.check_star_limiting() {
        Ok(()) => Vec::new(),
        Err(e) => vec![format!("{e}; polarity will be normalized before solving")],
    }
}

pub fn serialize_tbn(tbn: &Tbn) -> String {
    let mut out = String::new();
    for (monomer, count) in tbn.iter().filter(|(_, c)| *c > 0) {
        match monomer.label() {
            Some(l) => writeln!(out, "{count} * {l}: {}", monomer.site_string()),
            None => writeln!(out, "{count} * {}", monomer.site_string()),
        }
        .expect("writing to a String");
    }
    out
}

/// Parses a configuration whose monomers are looked up in `tbn`.
pub fn parse_configuration(text: &str, tbn: &Tbn) -> Result<Configuration> {
    let by_label: BTreeMap<&str, &MonomerType> =
        tbn.monomer_types().filter_map(|m| m.label().map(|l| (l, m))).collect();
    let mut items = Vec::new();
    for line in Line::lines(text) {
        let (count, rest) = line.count()?;
        let body = rest.trim();
        let inner = body.strip_prefix('{').ok_or_else(|| line.error(rest.trim_start(), "expected '{'"))?;
        let inner = inner
            .trim_end()
            .strip_suffix('}')
            .ok_or_else(|| line.error(body, "expected '}' at end of line"))?;
        let mut monomers = Vec::new();
        let mut cursor = inner;
        loop {
            cursor = cursor.trim_start();
            if cursor.is_empty() {
                break;
            }
            if let Some(open) = cursor.strip_prefix('(') {
                let close = open.find(')').ok_or_else(|| line.error(cursor, "unclosed '('"))?;
                let sites = parse_sites(&line, &open[..close])?;
                let unlabeled =
                    MonomerType::new(None, sites).map_err(|e| line.error(cursor, e.to_string()))?;
                let found = tbn
                    .monomer_types()
                    .find(|m| **m == unlabeled)
                    .ok_or_else(|| line.error(cursor, format!("no monomer {}", unlabeled.display_name())))?;
                monomers.push(found.clone());
                cursor = &open[close + 1..];
            } else {
                let end = cursor.find(|c: char| c.is_whitespace() || c == '(').unwrap_or(cursor.len());
                let label = &cursor[..end];
                let found = by_label
                    .get(label)
                    .ok_or_else(|| line.error(cursor, format!("unknown monomer {label:?}")))?;
                monomers.push((*found).clone());
                cursor = &cursor[end..];
            }
        }
        if monomers.is_empty() {
            return Err(line.error(rest, "polymer has no monomers"));
        }
        let polymer = Polymer::new(monomers).map_err(|e| line.error(rest, e.to_string()))?;
        items.push((polymer, count));
    }
    Ok(Configuration::from_counts(items))
}

pub fn serialize_configuration(config: &Configuration) -> String {
    let mut out = String::new();
    for (polymer, count) in config.iter() {
        writeln!(out, "{count} * {polymer}").expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::figure_examples;

    #[test]
    fn counts_and_labels() {
        let tbn = parse_tbn("2 * x: a b*\n1 * y: a* a*\n").unwrap();
        assert_eq!(tbn.num_monomer_types(), 2);
        assert_eq!(tbn.count(tbn.by_label("x").unwrap()), 2);
        assert_eq!(tbn.count(tbn.by_label("y").unwrap()), 1);
    }

    #[test]
    fn defaults_comments_and_accumulation() {
        let tbn = parse_tbn("# header\n\n a b  # trailing\n3*a b\nx: c\n2 * x: c\n").unwrap();
        assert_eq!(tbn.total_monomers(), 7);
        assert_eq!(tbn.num_monomer_types(), 2);
    }

    #[test]
    fn figure_one_text() {
        let ex = &figure_examples()["figure1"];
        let text = serialize_tbn(&ex.tbn);
        assert_eq!(text.lines().count(), 4);
        let back = parse_tbn(&text).unwrap();
        assert_eq!(back.melt().polymer_count(), 4);
        assert_eq!(serialize_tbn(&back), text);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_tbn("x: "),
            Err(TbnError::Parse { line: 1, column: 3, message: "monomer has no sites".into() })
        );
        assert!(matches!(parse_tbn("a\n0 * b"), Err(TbnError::Parse { line: 2, column: 1, .. })));
        assert!(matches!(parse_tbn("a b**"), Err(TbnError::Parse { line: 1, column: 3, .. })));
        assert!(matches!(parse_tbn(": a"), Err(TbnError::Parse { .. })));
        assert!(matches!(parse_tbn("x: a\nx: b"), Err(TbnError::Parse { line: 2, .. })));
    }

    #[test]
    fn warns_when_not_star_limiting() {
        let tbn = parse_tbn("a*\na*\na").unwrap();
        assert_eq!(tbn_warnings(&tbn).len(), 1);
        assert!(tbn_warnings(&parse_tbn("a\na*").unwrap()).is_empty());
    }

    #[test]
    fn configuration_round_trip() {
        for ex in figure_examples().values() {
            for (_, config) in &ex.configurations {
                let text = serialize_configuration(config);
                assert_eq!(parse_configuration(&text, &ex.tbn).unwrap(), *config);
            }
        }
    }

    #[test]
    fn unlabeled_monomers_in_configurations() {
        let tbn = parse_tbn("2 * a b\nc: a* b*").unwrap();
        let config = parse_configuration("1 * { (a b) c }\n1 * { (a b) }", &tbn).unwrap();
        assert_eq!(config.polymer_count(), 2);
        assert!(config.is_saturated());
        assert_eq!(serialize_configuration(&config), "1 * { (a b) }\n1 * { (a b) c }\n");
        assert!(matches!(
            parse_configuration("1 * { d }", &tbn),
            Err(TbnError::Parse { line: 1, column: 7, .. })
        ));
        assert!(parse_configuration("1 * { }", &tbn).is_err());
    }
}
