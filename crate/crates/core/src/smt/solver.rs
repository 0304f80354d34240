use std::io::Read;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::emit::SmtScript;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "kebab-case")]
pub enum SolverVerdict {
    /// The negated condition is unsatisfiable.
    Valid,
    /// Satisfiable; carries whatever the solver printed after `sat`.
    Invalid(String),
    Unknown,
    Timeout,
    /// The solver could not be started or answered something unexpected.
    SolverError(String),
}

impl SolverVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            SolverVerdict::Valid => "valid",
            SolverVerdict::Invalid(_) => "invalid",
            SolverVerdict::Unknown => "unknown",
            SolverVerdict::Timeout => "timeout",
            SolverVerdict::SolverError(_) => "solver-error",
        }
    }
}

const POLL: Duration = Duration::from_millis(5);

/// Runs `<solver_cmd> <file>` on each script in turn.
///
/// `solver_cmd` is split on whitespace, so it may carry options. The file
/// handed to the solver is the script followed by `(get-model)`, so that
/// a `sat` answer comes with a model.
pub fn run_solver(
    scripts: &[SmtScript],
    solver_cmd: &str,
    timeout: Duration,
) -> Vec<SolverVerdict> {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => {
            let msg = format!("cannot create a scratch directory: {e}");
            return scripts
                .iter()
                .map(|_| SolverVerdict::SolverError(msg.clone()))
                .collect();
        }
    };
    scripts
        .iter()
        .map(|s| {
            let path = dir.path().join(format!("vc_{}.smt2", s.vc_index + 1));
            match std::fs::write(&path, format!("{}(get-model)\n", s.text)) {
                Ok(()) => run_one(solver_cmd, &path, timeout),
                Err(e) => {
                    SolverVerdict::SolverError(format!("cannot write {}: {e}", path.display()))
                }
            }
        })
        .collect()
}

fn run_one(solver_cmd: &str, file: &std::path::Path, timeout: Duration) -> SolverVerdict {
    let mut words = solver_cmd.split_whitespace();
    let Some(program) = words.next() else {
        return SolverVerdict::SolverError("empty solver command".into());
    };
    let spawned = Command::new(program)
        .args(words)
        .arg(file)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn();
    let mut child = match spawned {
        Ok(c) => c,
        Err(e) => return SolverVerdict::SolverError(format!("failed to start `{program}`: {e}")),
    };

    // drain the pipes concurrently so a chatty solver cannot block
    let mut stdout = child.stdout.take().expect("piped");
    let mut stderr = child.stderr.take().expect("piped");
    let out_reader = thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let err_reader = thread::spawn(move || {
        let mut s = String::new();
        let _ = stderr.read_to_string(&mut s);
        s
    });

    let start = Instant::now();
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Some(status),
            Ok(None) if start.elapsed() >= timeout => {
                let _ = child.kill();
                let _ = child.wait();
                break None;
            }
            Ok(None) => thread::sleep(POLL),
            Err(e) => return SolverVerdict::SolverError(format!("lost the solver process: {e}")),
        }
    };
    if status.is_none() {
        // a grandchild may still hold the pipes open; leave the readers behind
        return SolverVerdict::Timeout;
    }
    let out = out_reader.join().unwrap_or_default();
    let err = err_reader.join().unwrap_or_default();
    classify(&out, &err)
}

fn classify(out: &str, err: &str) -> SolverVerdict {
    let mut lines = out.lines().map(str::trim).filter(|l| !l.is_empty());
    match lines.next() {
        Some("unsat") => SolverVerdict::Valid,
        Some("sat") => SolverVerdict::Invalid(lines.collect::<Vec<_>>().join("\n")),
        Some("unknown") => SolverVerdict::Unknown,
        Some("timeout") => SolverVerdict::Timeout,
        _ => {
            let mut raw = out.trim().to_string();
            if !err.trim().is_empty() {
                if !raw.is_empty() {
                    raw.push('\n');
                }
                raw.push_str(err.trim());
            }
            SolverVerdict::SolverError(raw)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::os::unix::fs::PermissionsExt;

    fn fake_solver(dir: &std::path::Path, name: &str, body: &str) -> String {
        let path = dir.join(name);
        std::fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
        std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
        path.to_string_lossy().into_owned()
    }

    fn script(text: &str, i: usize) -> SmtScript {
        SmtScript {
            text: text.to_string(),
            vc_index: i,
        }
    }

    #[test]
    fn answers_are_mapped() {
        let dir = tempfile::tempdir().unwrap();
        // answers `sat` with a model when the script mentions MARK, else `unsat`
        let cmd = fake_solver(
            dir.path(),
            "solver",
            r#"if grep -q MARK "$1"; then printf 'sat\n(model (define-fun x () Int (- 1)))\n'; else echo unsat; fi"#,
        );
        let verdicts = run_solver(
            &[
                script("(check-sat)\n", 0),
                script("; MARK\n(check-sat)\n", 1),
            ],
            &cmd,
            Duration::from_secs(5),
        );
        assert_eq!(verdicts[0], SolverVerdict::Valid);
        assert_eq!(
            verdicts[1],
            SolverVerdict::Invalid("(model (define-fun x () Int (- 1)))".into())
        );
        assert!(run_solver(&[], &cmd, Duration::from_secs(1)).is_empty());
    }

    #[test]
    fn scripts_reach_the_solver_with_a_model_request() {
        let dir = tempfile::tempdir().unwrap();
        let cmd = fake_solver(
            dir.path(),
            "solver",
            r#"tail -n 1 "$1" | grep -q '(get-model)' && echo unknown"#,
        );
        assert_eq!(
            run_solver(&[script("(check-sat)\n", 0)], &cmd, Duration::from_secs(5)),
            vec![SolverVerdict::Unknown]
        );
    }

    #[test]
    fn failures_are_not_verdicts() {
        let dir = tempfile::tempdir().unwrap();
        let missing = run_solver(
            &[script("", 0)],
            "/nonexistent/solver --flag",
            Duration::from_secs(1),
        );
        assert!(
            matches!(&missing[0], SolverVerdict::SolverError(m) if m.contains("failed to start"))
        );

        let garbage = fake_solver(
            dir.path(),
            "garbage",
            "echo '(error \"bad\")'; echo oops >&2",
        );
        let v = run_solver(&[script("", 0)], &garbage, Duration::from_secs(5));
        assert_eq!(
            v,
            vec![SolverVerdict::SolverError("(error \"bad\")\noops".into())]
        );

        let slow = fake_solver(dir.path(), "slow", "sleep 5; echo unsat");
        let started = Instant::now();
        let v = run_solver(&[script("", 0)], &slow, Duration::from_millis(200));
        assert_eq!(v, vec![SolverVerdict::Timeout]);
        assert!(started.elapsed() < Duration::from_secs(4));
    }
}
