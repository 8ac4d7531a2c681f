use std::fmt;
use std::str::FromStr;

/// Every primitive rule of the supported calculi.
///
/// Double-line rules contribute two directed tags. `*Bwd` concludes the
/// sequent written under the double line from the one above it; `*Fwd`
/// concludes the upper sequent from the lower one. For `(!e)` the lower
/// shape is `u[y∘x!]`; for `(!a)`, `(!a*)` and `(a)` it is the right-nested
/// one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    Id,
    OneR,
    OneL,
    Cut,
    FusL,
    FusR,
    BslL,
    BslR,
    SlL,
    SlR,
    AndL1,
    AndL2,
    AndR,
    OrL,
    OrR1,
    OrR2,
    BangL,
    BangR,
    BangW,
    BangC,
    BangEFwd,
    BangEBwd,
    BangAFwd,
    BangABwd,
    BangAsFwd,
    BangAsBwd,
    E,
    C,
    W,
    AFwd,
    ABwd,
    ZeroL,
    ZeroR,
    TopR,
    BotL,
    Dn1a,
    Dn1b,
    Dn2a,
    Dn2b,
    ConA,
    ConB,
    CycA,
    CycB,
    Hyp(usize),
}

const NAMES: &[(RuleId, &str)] = &[
    (RuleId::Id, "Id"),
    (RuleId::OneR, "OneR"),
    (RuleId::OneL, "OneL"),
    (RuleId::Cut, "Cut"),
    (RuleId::FusL, "FusL"),
    (RuleId::FusR, "FusR"),
    (RuleId::BslL, "BslL"),
    (RuleId::BslR, "BslR"),
    (RuleId::SlL, "SlL"),
    (RuleId::SlR, "SlR"),
    (RuleId::AndL1, "AndL1"),
    (RuleId::AndL2, "AndL2"),
    (RuleId::AndR, "AndR"),
    (RuleId::OrL, "OrL"),
    (RuleId::OrR1, "OrR1"),
    (RuleId::OrR2, "OrR2"),
    (RuleId::BangL, "BangL"),
    (RuleId::BangR, "BangR"),
    (RuleId::BangW, "BangW"),
    (RuleId::BangC, "BangC"),
    (RuleId::BangEFwd, "BangE_fwd"),
    (RuleId::BangEBwd, "BangE_bwd"),
    (RuleId::BangAFwd, "BangA_fwd"),
    (RuleId::BangABwd, "BangA_bwd"),
    (RuleId::BangAsFwd, "BangAs_fwd"),
    (RuleId::BangAsBwd, "BangAs_bwd"),
    (RuleId::E, "E"),
    (RuleId::C, "C"),
    (RuleId::W, "W"),
    (RuleId::AFwd, "A_fwd"),
    (RuleId::ABwd, "A_bwd"),
    (RuleId::ZeroL, "ZeroL"),
    (RuleId::ZeroR, "ZeroR"),
    (RuleId::TopR, "TopR"),
    (RuleId::BotL, "BotL"),
    (RuleId::Dn1a, "DN1a"),
    (RuleId::Dn1b, "DN1b"),
    (RuleId::Dn2a, "DN2a"),
    (RuleId::Dn2b, "DN2b"),
    (RuleId::ConA, "CONa"),
    (RuleId::ConB, "CONb"),
    (RuleId::CycA, "CycA"),
    (RuleId::CycB, "CycB"),
];

impl RuleId {
    pub fn arity(self) -> usize {
        use RuleId::*;
        match self {
            Id | OneR | ZeroL | TopR | BotL | Dn1a | Dn1b | Dn2a | Dn2b | ConA | ConB | CycA
            | CycB | Hyp(_) => 0,
            Cut | FusR | BslL | SlL | AndR | OrL => 2,
            _ => 1,
        }
    }

    /// The inverse direction of a double-line tag.
    pub fn converse(self) -> Option<RuleId> {
        use RuleId::*;
        Some(match self {
            BangEFwd => BangEBwd,
            BangEBwd => BangEFwd,
            BangAFwd => BangABwd,
            BangABwd => BangAFwd,
            BangAsFwd => BangAsBwd,
            BangAsBwd => BangAsFwd,
            AFwd => ABwd,
            ABwd => AFwd,
            _ => return None,
        })
    }

    pub fn is_contraction(self) -> bool {
        matches!(self, RuleId::C | RuleId::BangC)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let RuleId::Hyp(i) = self {
            return write!(f, "Hyp({i})");
        }
        let name = NAMES.iter().find(|(r, _)| r == self).map(|(_, n)| *n).unwrap_or("?");
        f.write_str(name)
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(idx) = s.strip_prefix("Hyp(").and_then(|r| r.strip_suffix(')')) {
            return idx.parse().map(RuleId::Hyp).map_err(|_| format!("bad hypothesis index in {s:?}"));
        }
        NAMES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(r, _)| *r)
            .ok_or_else(|| format!("unknown rule {s:?}"))
    }
}
