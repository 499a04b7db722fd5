//! Verification reports and the law registry.

use serde::Serialize;
use std::fmt;
use std::time::Duration;

pub const REGISTRY_VERSION: u32 = 1;

macro_rules! laws {
    ($($variant:ident => $id:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Law { $($variant),* }

        impl Law {
            pub const ALL: &'static [Law] = &[$(Law::$variant),*];

            pub fn id(self) -> &'static str {
                match self { $(Law::$variant => $id),* }
            }

            pub fn from_id(id: &str) -> Option<Law> {
                match id { $($id => Some(Law::$variant),)* _ => None }
            }
        }
    };
}

laws! {
    StructureOrder => "structure.order",
    StructureVariance => "structure.variance",
    SepUpward => "separator.upward-closed",
    SepModusPonens => "separator.modus-ponens",
    SepK => "separator.k",
    SepS => "separator.s",
    SepA => "separator.a",
    SepI => "separator.i",
    SepB => "separator.b",
    JoinCompat => "algebra.join-compatible",
    PartialShift => "algebra.partial-shift",
    ApplyMonotone => "apply.monotone",
    ApplyBeta => "apply.beta",
    ApplySeparator => "apply.separator",
    AbstractMonotone => "abstract.monotone",
    AbstractBeta => "abstract.beta",
    LogicOrder => "logic.order",
    LogicProduct => "logic.product",
    LogicSum => "logic.sum",
    LogicTop => "logic.top",
    FrameCollapse => "frame.collapse",
    LambdaClosure => "lambda.separator-closure",
    PapMonotone => "pap.monotone",
    FilterUpward => "filter.upward-closed",
    FilterApplication => "filter.application-closed",
    PcaK => "pca.k",
    PcaSDefined => "pca.s-defined",
    PcaSReduction => "pca.s-reduction",
    BracketDefined => "bracket.defined",
    BracketKleene => "bracket.kleene",
    BracketFilter => "bracket.filter",
    PcaIdentity => "pca.i",
    PcaKbar => "pca.kbar",
    PcaPairing => "pca.pairing",
    PcaDownsetIso => "pca.downset-two-element",
    PcaMorphFilter => "pca-morphism.filter",
    PcaMorphApplication => "pca-morphism.application",
    PcaMorphOrder => "pca-morphism.order",
    PcaMorphDense => "pca-morphism.dense",
    PcaDenseAdjoint => "pca-morphism.dense-adjoint",
    ImplSeparator => "implicative.separator",
    ImplRealizer => "implicative.realizer",
    ImplUniform => "implicative.uniform",
    Cartesian => "morphism.cartesian",
    AdjRight => "adjoint.right-implicative",
    AdjCounit => "adjoint.fh-entails-id",
    AdjUnit => "adjoint.id-entails-hf",
    AdjExists => "adjoint.exists",
    Regular => "morphism.regular",
    RegularJoinForm => "morphism.regular-join-form",
    FrameImplicative => "frame.implicative-iff-meets",
    FrameDense => "frame.dense-iff-homomorphism",
    NucMonotone => "nucleus.monotone",
    NucInflationary => "nucleus.inflationary",
    NucClosure => "nucleus.closure",
    NucIdempotent => "nucleus.idempotent",
    NucFunctorial => "nucleus.functorial",
    NucInternal => "nucleus.internal",
    QuotientAlgebra => "quotient.algebra",
    QuotientSeparator => "quotient.separator-grows",
    QuotientSurjection => "quotient.surjection",
    QuotientEntailment => "quotient.entailment",
    NucleusFromAdjoint => "nucleus.from-adjoint",
    ClosureForward => "closure.from-nucleus",
    ClosureBackward => "closure.to-nucleus",
    FactorSurjection => "factorize.surjection",
    FactorInjection => "factorize.injection",
    FactorComposite => "factorize.composite",
    FactorEquivalence => "factorize.equivalence-iff-surjection",
    TriposExists => "tripos.exists-adjoint",
    TriposForall => "tripos.forall-adjoint",
    TriposBcForall => "tripos.beck-chevalley-forall",
    TriposBcExists => "tripos.beck-chevalley-exists",
    TriposExistsJoin => "tripos.exists-join-form",
    TriposGeneric => "tripos.generic-element",
    TriposPower => "tripos.power-algebra",
    InducedMonotone => "tripos.induced-monotone",
    InducedCartesian => "tripos.induced-cartesian",
    InducedRecover => "tripos.induced-recover",
    Subtripos => "tripos.subtripos",
    SierpAlgebra => "sierpinski.algebra",
    SierpBinary => "sierpinski.binary-implicative",
    SierpProjection => "sierpinski.projection-surjection",
    SierpJoins => "sierpinski.joins",
    OpenNucleus => "sierpinski.open-nucleus",
    ClosedNucleus => "sierpinski.closed-nucleus",
    OpenIsProjection => "sierpinski.open-is-projection",
    LiftImplicative => "lift.implicative",
    LiftAdjoint => "lift.adjoint",
    LiftCommutes => "lift.commutes",
    ModClosedLift => "modified.closed-lift",
    ModPullback => "modified.pullback",
    ModImplicative => "modified.implicative",
    ModPseudofunctor => "modified.pseudofunctor",
    ModAdjoint => "modified.adjoint",
    ModSquare => "modified.square",
    ModPredicates => "modified.predicates",
    TautologyCheck => "logic.tautology",
    OracleAgreement => "oracle.agreement",
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for Law {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// Outcome of one law on one subject.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub subject: String,
    pub law: Law,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counterexample: Vec<String>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl Finding {
    pub fn new(subject: impl Into<String>, law: Law, status: Status) -> Self {
        Finding { subject: subject.into(), law, status, witness: Vec::new(), counterexample: Vec::new(), note: String::new(), elapsed: None }
    }

    pub fn pass(subject: impl Into<String>, law: Law) -> Self {
        Self::new(subject, law, Status::Pass)
    }

    pub fn fail(subject: impl Into<String>, law: Law) -> Self {
        Self::new(subject, law, Status::Fail)
    }

    pub fn inconclusive(subject: impl Into<String>, law: Law, note: impl Into<String>) -> Self {
        Self::new(subject, law, Status::Inconclusive).note(note)
    }

    pub fn from_bool(subject: impl Into<String>, law: Law, ok: bool) -> Self {
        Self::new(subject, law, if ok { Status::Pass } else { Status::Fail })
    }

    pub fn witness<I, S>(mut self, w: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.witness = w.into_iter().map(Into::into).collect();
        self
    }

    pub fn counterexample<I, S>(mut self, w: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.counterexample = w.into_iter().map(Into::into).collect();
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn text_line(&self, timing: bool) -> String {
        let mut line = format!("{} {} {}", self.status, self.subject, self.law);
        if !self.witness.is_empty() {
            line.push_str(&format!(" witness=[{}]", self.witness.join(",")));
        }
        if !self.counterexample.is_empty() {
            line.push_str(&format!(" counterexample=[{}]", self.counterexample.join(",")));
        }
        if !self.note.is_empty() {
            line.push_str(&format!(" ({})", self.note));
        }
        if timing {
            if let Some(d) = self.elapsed {
                line.push_str(&format!(" {}us", d.as_micros()));
            }
        }
        line
    }
}

/// A batch of findings, usually about one subject.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub findings: Vec<Finding>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, f: Finding) {
        self.findings.push(f);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.findings.extend(other.findings);
    }

    pub fn status(&self) -> Status {
        if self.findings.iter().any(|f| f.status == Status::Fail) {
            Status::Fail
        } else if self.findings.iter().any(|f| f.status == Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.status() == Status::Pass
    }

    pub fn first_failure(&self) -> Option<&Finding> {
        self.findings.iter().find(|f| f.status == Status::Fail)
    }

    pub fn get(&self, law: Law) -> Option<&Finding> {
        self.findings.iter().find(|f| f.law == law)
    }

    pub fn law_passed(&self, law: Law) -> bool {
        self.get(law).map(|f| f.is_pass()).unwrap_or(false)
    }

    /// Collapses per-instance findings for one law: the first failure if any, otherwise a pass
    /// counting the instances, or the first inconclusive finding when nothing passed.
    pub fn summarize(subject: &str, law: Law, findings: Vec<Finding>) -> Finding {
        if let Some(f) = findings.iter().find(|f| f.status == Status::Fail) {
            return f.clone();
        }
        let total = findings.len();
        let passes = findings.iter().filter(|f| f.is_pass()).count();
        if passes == 0 && total > 0 {
            return findings[0].clone();
        }
        let f = Finding::pass(subject, law).witness([format!("{passes} instances")]);
        if passes < total {
            f.note(format!("{} instances inconclusive", total - passes))
        } else {
            f
        }
    }

    /// Sorts by (subject, law) and keeps the first of equal keys' relative order.
    pub fn canonicalize(&mut self) {
        self.findings.sort_by(|a, b| (a.subject.as_str(), a.law.id()).cmp(&(b.subject.as_str(), b.law.id())));
    }

    pub fn to_text(&self, timing: bool) -> String {
        let mut out = String::new();
        for f in &self.findings {
            out.push_str(&f.text_line(timing));
            out.push('\n');
        }
        out
    }

    pub fn to_structured(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            registry_version: u32,
            status: Status,
            findings: &'a [Finding],
        }
        serde_json::to_string_pretty(&Doc { registry_version: REGISTRY_VERSION, status: self.status(), findings: &self.findings }).expect("report serializes")
    }
}

impl FromIterator<Finding> for VerificationReport {
    fn from_iter<T: IntoIterator<Item = Finding>>(iter: T) -> Self {
        VerificationReport { findings: iter.into_iter().collect() }
    }
}

impl FromIterator<VerificationReport> for VerificationReport {
    fn from_iter<T: IntoIterator<Item = VerificationReport>>(iter: T) -> Self {
        VerificationReport { findings: iter.into_iter().flat_map(|r| r.findings).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_ids_round_trip_and_are_unique() {
        let mut seen = std::collections::HashSet::new();
        for &law in Law::ALL {
            assert!(seen.insert(law.id()), "duplicate id {}", law.id());
            assert_eq!(Law::from_id(law.id()), Some(law));
        }
    }

    #[test]
    fn status_aggregates_worst_case() {
        let mut r = VerificationReport::new();
        r.push(Finding::pass("x", Law::SepK));
        assert!(r.passed());
        r.push(Finding::inconclusive("x", Law::JoinCompat, "cap"));
        assert_eq!(r.status(), Status::Inconclusive);
        r.push(Finding::fail("x", Law::SepS));
        assert_eq!(r.status(), Status::Fail);
        assert_eq!(r.first_failure().unwrap().law, Law::SepS);
    }

    #[test]
    fn structured_output_omits_timing() {
        let mut f = Finding::pass("x", Law::SepK);
        f.elapsed = Some(Duration::from_millis(3));
        let r: VerificationReport = std::iter::once(f).collect();
        assert!(!r.to_structured().contains("elapsed"));
    }
}
