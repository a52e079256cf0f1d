//! TOML description of a subshift.
//!
//! ```toml
//! type = "sft"
//! alphabet = 2
//! forbidden = ["11"]
//! ```
//!
//! Substitutions give `rules = { "0" = "01", "1" = "10" }`; Sturmian systems
//! give `convergent = "3/5"` and an optional `intercept = "0"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::exact::{parse_rational, Rational};
use crate::symcore::subshift::{Subshift, SubshiftKind};
use crate::symcore::word::{Alphabet, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemType {
    Full,
    Sft,
    Substitution,
    Sturmian,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(rename = "type")]
    pub kind: SystemType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forbidden: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rules: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergent: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intercept: Option<String>,
}

fn field(name: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("field `{name}`: {msg}"))
}

impl SystemConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))
    }

    pub fn full(ell: usize) -> Self {
        SystemConfig {
            kind: SystemType::Full,
            alphabet: Some(ell),
            forbidden: Vec::new(),
            rules: BTreeMap::new(),
            convergent: None,
            intercept: None,
        }
    }

    fn unexpected(&self, present: bool, name: &str) -> Result<()> {
        if present {
            return Err(field(name, format!("not used by type {:?}", self.kind).to_lowercase()));
        }
        Ok(())
    }

    pub fn build(&self, caps: Caps) -> Result<Subshift> {
        let alphabet = |n: Option<usize>| -> Result<Alphabet> {
            Alphabet::new(n.ok_or_else(|| field("alphabet", "missing"))?).map_err(|e| field("alphabet", e))
        };
        match self.kind {
            SystemType::Full | SystemType::Sft => {
                self.unexpected(!self.rules.is_empty(), "rules")?;
                self.unexpected(self.convergent.is_some(), "convergent")?;
                self.unexpected(self.intercept.is_some(), "intercept")?;
                let a = alphabet(self.alphabet)?;
                if self.kind == SystemType::Full {
                    self.unexpected(!self.forbidden.is_empty(), "forbidden")?;
                    return Subshift::build(a, SubshiftKind::Full, caps);
                }
                let forbidden = self
                    .forbidden
                    .iter()
                    .enumerate()
                    .map(|(i, s)| Word::parse_in(s, a).map_err(|e| field(&format!("forbidden[{i}]"), e)))
                    .collect::<Result<Vec<_>>>()?;
                Subshift::build(a, SubshiftKind::Sft { forbidden }, caps)
            }
            SystemType::Substitution => {
                self.unexpected(!self.forbidden.is_empty(), "forbidden")?;
                self.unexpected(self.convergent.is_some(), "convergent")?;
                self.unexpected(self.intercept.is_some(), "intercept")?;
                let n = self.alphabet.unwrap_or(self.rules.len());
                let a = alphabet(Some(n))?;
                let mut rules = vec![None; n];
                for (k, v) in &self.rules {
                    let name = format!("rules.{k}");
                    let sym = Word::parse_in(k, a).map_err(|e| field(&name, e))?;
                    if sym.len() != 1 {
                        return Err(field(&name, "keys must be single symbols"));
                    }
                    rules[sym.0[0] as usize] = Some(Word::parse_in(v, a).map_err(|e| field(&name, e))?);
                }
                let rules = rules
                    .into_iter()
                    .enumerate()
                    .map(|(i, r)| r.ok_or_else(|| field("rules", format!("no rule for symbol {i}"))))
                    .collect::<Result<Vec<_>>>()?;
                Subshift::build(a, SubshiftKind::Substitution { rules }, caps)
            }
            SystemType::Sturmian => {
                self.unexpected(!self.forbidden.is_empty(), "forbidden")?;
                self.unexpected(!self.rules.is_empty(), "rules")?;
                if self.alphabet.is_some_and(|n| n != 2) {
                    return Err(field("alphabet", "Sturmian systems are binary"));
                }
                let c = self.convergent.as_deref().ok_or_else(|| field("convergent", "missing"))?;
                let (p, q) = c
                    .split_once('/')
                    .and_then(|(p, q)| Some((p.trim().parse::<u64>().ok()?, q.trim().parse::<u64>().ok()?)))
                    .ok_or_else(|| field("convergent", format!("expected p/q, got {c:?}")))?;
                let intercept: Rational = match &self.intercept {
                    Some(s) => parse_rational(s).ok_or_else(|| field("intercept", format!("not a rational: {s:?}")))?,
                    None => Rational::from_integer(0.into()),
                };
                Subshift::build(Alphabet::new(2)?, SubshiftKind::Sturmian { p, q, intercept }, caps)
                    .map_err(|e| field("convergent", e))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_mean() {
        let c = SystemConfig::parse("type = \"sft\"\nalphabet = 2\nforbidden = [\"11\"]\n").unwrap();
        let x = c.build(Caps::default()).unwrap();
        assert_eq!(x.count_words(3).unwrap(), 5);
    }

    #[test]
    fn substitution_and_sturmian() {
        let c = SystemConfig::parse("type = \"substitution\"\nrules = { \"0\" = \"01\", \"1\" = \"10\" }\n").unwrap();
        assert_eq!(c.build(Caps::default()).unwrap().ell(), 2);
        let c = SystemConfig::parse("type = \"sturmian\"\nconvergent = \"3/5\"\nintercept = \"1/5\"\n").unwrap();
        assert!(c.build(Caps::default()).is_ok());
    }

    #[test]
    fn diagnostics_name_the_field() {
        let e = SystemConfig::parse("type = \"sft\"\nalphabet = 2\nforbiden = [\"11\"]\n").unwrap_err();
        assert!(e.to_string().contains("forbiden"), "{e}");
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = SystemConfig::parse("type = \"sft\"\nalphabet = 2\nforbidden = [\"12\"]\n")
            .unwrap()
            .build(Caps::default())
            .unwrap_err();
        assert!(e.to_string().contains("forbidden[0]"), "{e}");
        let e = SystemConfig::parse("type = \"sturmian\"\n").unwrap().build(Caps::default()).unwrap_err();
        assert!(e.to_string().contains("convergent"), "{e}");
        assert!(SystemConfig::parse("type = \"weird\"\n").is_err());
    }
}
