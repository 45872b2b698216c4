use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: String,
    pub detail: String,
}

/// Outcome of a validation pass; failures are entries, not errors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violate(&mut self, condition: &str, detail: impl Into<String>) {
        self.violations.push(Violation { condition: condition.to_string(), detail: detail.into() });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn has(&self, condition: &str) -> bool {
        self.violations.iter().any(|v| v.condition == condition)
    }

    pub fn merge(&mut self, prefix: &str, other: ValidationReport) {
        for v in other.violations {
            self.violations.push(Violation { condition: format!("{prefix}{}", v.condition), detail: v.detail });
        }
        self.notes.extend(other.notes.into_iter().map(|n| format!("{prefix}{n}")));
    }
}
