//! `CHECK` report lines shared by the verification suites.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub instance: String,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CHECK {} {} {} {}",
            self.name, self.instance, self.status, self.detail
        )
    }
}

pub(crate) struct Sink {
    instance: String,
    pub(crate) checks: Vec<Check>,
}

impl Sink {
    pub(crate) fn new(instance: String) -> Sink {
        Sink {
            instance,
            checks: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, name: &'static str, status: Status, detail: String) {
        self.checks.push(Check {
            name,
            instance: self.instance.clone(),
            status,
            detail,
        });
    }

    pub(crate) fn eq<T: PartialEq + fmt::Display>(&mut self, name: &'static str, a: T, b: T) {
        let status = if a == b { Status::Pass } else { Status::Fail };
        let op = if a == b { "=" } else { "!=" };
        self.push(name, status, format!("({a} {op} {b})"));
    }

    pub(crate) fn tally(&mut self, name: &'static str, ok: usize, total: usize) {
        let status = match total {
            0 => Status::Skip,
            _ if ok == total => Status::Pass,
            _ => Status::Fail,
        };
        self.push(name, status, format!("({ok}/{total})"));
    }
}
