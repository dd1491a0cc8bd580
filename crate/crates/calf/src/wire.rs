//! Line protocol between a learner and a black-box membership oracle.
//!
//! ```text
//! oracle:  calf-oracle 1 bit
//! oracle:  alphabet: a b
//! learner: Q a b a
//! oracle:  1
//! learner: BYE
//! ```

use std::fmt;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::marker::PhantomData;
use std::net::{TcpListener, TcpStream, ToSocketAddrs};
use std::path::PathBuf;
use std::process::{Child, Command, Stdio};
use std::str::FromStr;
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use calf_core::weighted::{parse_rational, Rational};
use calf_core::{Alphabet, MembershipOracle, OracleError, Word};

use crate::format::Machine;

pub const PROTOCOL_VERSION: &str = "1";
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Bit,
    Rational,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Bit => "bit",
            Mode::Rational => "rational",
        }
    }

    pub fn of(machine: &Machine) -> Mode {
        match machine {
            Machine::Dfa(_) => Mode::Bit,
            Machine::Wfa(_) => Mode::Rational,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Answer type of a session.
pub trait Reply: Clone + PartialEq {
    const MODE: Mode;
    fn parse_reply(line: &str) -> Option<Self>;
    fn render_reply(&self) -> String;
}

impl Reply for bool {
    const MODE: Mode = Mode::Bit;

    fn parse_reply(line: &str) -> Option<bool> {
        match line {
            "1" => Some(true),
            "0" => Some(false),
            _ => None,
        }
    }

    fn render_reply(&self) -> String {
        if *self { "1" } else { "0" }.to_string()
    }
}

impl Reply for Rational {
    const MODE: Mode = Mode::Rational;

    fn parse_reply(line: &str) -> Option<Rational> {
        parse_rational(line)
    }

    fn render_reply(&self) -> String {
        self.to_string()
    }
}

/// Where membership answers come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    /// A machine file simulated in-process.
    File(PathBuf),
    /// A command line; the oracle speaks on its stdin and stdout.
    Exec(String),
    /// `host:port`
    Tcp(String),
}

impl FromStr for Endpoint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) =
            s.split_once(':').ok_or_else(|| format!("endpoint `{s}` must start with file:, exec: or tcp:"))?;
        if rest.trim().is_empty() {
            return Err(format!("endpoint `{s}` is missing its {kind} target"));
        }
        match kind {
            "file" => Ok(Endpoint::File(PathBuf::from(rest))),
            "exec" => Ok(Endpoint::Exec(rest.to_string())),
            "tcp" => Ok(Endpoint::Tcp(rest.to_string())),
            _ => Err(format!("unknown endpoint kind `{kind}` (expected file, exec or tcp)")),
        }
    }
}

fn spawn_reader(r: impl Read + Send + 'static) -> Receiver<io::Result<String>> {
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let mut r = BufReader::new(r);
        loop {
            let mut line = String::new();
            match r.read_line(&mut line) {
                Ok(0) => break,
                Ok(_) => {
                    if tx.send(Ok(line)).is_err() {
                        break;
                    }
                }
                Err(e) => {
                    let _ = tx.send(Err(e));
                    break;
                }
            }
        }
    });
    rx
}

enum Recv {
    Line(String),
    Closed,
    Timeout,
    Failed(io::Error),
}

/// A connected oracle session. Sends `BYE` when dropped.
pub struct Session<T: Reply> {
    alphabet: Alphabet,
    writer: Box<dyn Write + Send>,
    lines: Receiver<io::Result<String>>,
    timeout: Duration,
    child: Option<Child>,
    sent: u64,
    _reply: PhantomData<T>,
}

impl<T: Reply> Session<T> {
    /// Connects to a process or TCP oracle and checks its banner. When
    /// `expected` is given, the announced alphabet must have the same
    /// symbols; otherwise the announced alphabet is adopted.
    pub fn connect(endpoint: &Endpoint, expected: Option<&Alphabet>, timeout: Duration) -> Result<Self, OracleError> {
        let setup = |m: String| OracleError::Setup(m);
        let (writer, lines, child): (Box<dyn Write + Send>, _, _) = match endpoint {
            Endpoint::Exec(cmd) => {
                let mut parts = cmd.split_whitespace();
                let program = parts.next().ok_or_else(|| setup("empty oracle command".into()))?;
                let mut child = Command::new(program)
                    .args(parts)
                    .stdin(Stdio::piped())
                    .stdout(Stdio::piped())
                    .stderr(Stdio::inherit())
                    .spawn()
                    .map_err(|e| setup(format!("cannot start `{cmd}`: {e}")))?;
                let stdin = child.stdin.take().expect("piped stdin");
                let stdout = child.stdout.take().expect("piped stdout");
                (Box::new(stdin), spawn_reader(stdout), Some(child))
            }
            Endpoint::Tcp(addr) => {
                let target = addr
                    .to_socket_addrs()
                    .map_err(|e| setup(format!("cannot resolve `{addr}`: {e}")))?
                    .next()
                    .ok_or_else(|| setup(format!("`{addr}` resolves to no address")))?;
                let stream = TcpStream::connect_timeout(&target, timeout)
                    .map_err(|e| setup(format!("cannot connect to {addr}: {e}")))?;
                let _ = stream.set_nodelay(true);
                let read = stream.try_clone().map_err(|e| setup(e.to_string()))?;
                (Box::new(stream), spawn_reader(read), None)
            }
            Endpoint::File(p) => {
                return Err(setup(format!("`file:{}` is simulated in-process, not a wire oracle", p.display())))
            }
        };
        let mut session = Session {
            alphabet: Alphabet::new(["_"]).expect("placeholder alphabet"),
            writer,
            lines,
            timeout,
            child,
            sent: 0,
            _reply: PhantomData,
        };
        session.handshake(expected)?;
        Ok(session)
    }

    fn recv(&mut self) -> Recv {
        match self.lines.recv_timeout(self.timeout) {
            Ok(Ok(line)) => Recv::Line(line.trim_end_matches(['\r', '\n']).to_string()),
            Ok(Err(e)) => Recv::Failed(e),
            Err(RecvTimeoutError::Timeout) => Recv::Timeout,
            Err(RecvTimeoutError::Disconnected) => Recv::Closed,
        }
    }

    fn exit_status(&mut self) -> String {
        let Some(child) = &mut self.child else {
            return "connection closed".into();
        };
        let start = Instant::now();
        while start.elapsed() < Duration::from_secs(2) {
            match child.try_wait() {
                Ok(Some(status)) => return format!("oracle exited with {status}"),
                Ok(None) => thread::sleep(Duration::from_millis(10)),
                Err(e) => return format!("cannot read exit status: {e}"),
            }
        }
        "oracle closed its output but is still running".into()
    }

    fn setup_line(&mut self, what: &str) -> Result<String, OracleError> {
        match self.recv() {
            Recv::Line(l) => Ok(l),
            Recv::Closed => {
                let status = self.exit_status();
                Err(OracleError::Setup(format!("no {what} before the oracle closed the connection ({status})")))
            }
            Recv::Timeout => Err(OracleError::Setup(format!("no {what} within {:?}", self.timeout))),
            Recv::Failed(e) => Err(OracleError::Setup(format!("reading the {what}: {e}"))),
        }
    }

    fn handshake(&mut self, expected: Option<&Alphabet>) -> Result<(), OracleError> {
        let banner = self.setup_line("banner")?;
        let parts: Vec<&str> = banner.split_whitespace().collect();
        match parts[..] {
            ["calf-oracle", PROTOCOL_VERSION, mode] if mode == T::MODE.as_str() => {}
            ["calf-oracle", PROTOCOL_VERSION, mode] => {
                return Err(OracleError::Setup(format!("oracle answers in {mode} mode, expected {}", T::MODE)))
            }
            ["calf-oracle", v, _] => return Err(OracleError::Setup(format!("unsupported protocol version {v}"))),
            _ => return Err(OracleError::Setup(format!("unexpected banner `{banner}`"))),
        }
        let line = self.setup_line("alphabet line")?;
        let Some(tokens) = line.strip_prefix("alphabet:") else {
            return Err(OracleError::Setup(format!("expected `alphabet: ...`, found `{line}`")));
        };
        let announced = Alphabet::new(tokens.split_whitespace())
            .map_err(|e| OracleError::Setup(format!("oracle announced a bad alphabet: {e}")))?;
        self.alphabet = match expected {
            Some(a) if !a.same_tokens(&announced) => {
                return Err(OracleError::Setup(format!(
                    "oracle alphabet {{{}}} does not match the configured {{{}}}",
                    announced.tokens().join(", "),
                    a.tokens().join(", ")
                )))
            }
            Some(a) => a.clone(),
            None => announced,
        };
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Queries actually written to the wire.
    pub fn sent(&self) -> u64 {
        self.sent
    }

    pub fn ask(&mut self, word: &Word) -> Result<T, OracleError> {
        if !self.alphabet.contains_word(word) {
            return Err(OracleError::Transport("query word uses symbols outside the alphabet".into()));
        }
        let request = format!("Q {}", self.alphabet.render(word));
        writeln!(self.writer, "{request}")
            .and_then(|_| self.writer.flush())
            .map_err(|e| OracleError::Transport(format!("cannot send `{request}`: {e}")))?;
        self.sent += 1;
        match self.recv() {
            Recv::Line(l) => T::parse_reply(l.trim())
                .ok_or_else(|| OracleError::Transport(format!("malformed {} reply `{l}` to `{request}`", T::MODE))),
            Recv::Closed => {
                let status = self.exit_status();
                Err(OracleError::Transport(format!("no reply to `{request}` ({status})")))
            }
            Recv::Timeout => Err(OracleError::Transport(format!("no reply to `{request}` within {:?}", self.timeout))),
            Recv::Failed(e) => Err(OracleError::Transport(format!("reading the reply to `{request}`: {e}"))),
        }
    }
}

impl<T: Reply> MembershipOracle for Session<T> {
    type Output = T;

    fn query(&mut self, word: &Word) -> Result<T, OracleError> {
        self.ask(word)
    }
}

impl<T: Reply> Drop for Session<T> {
    fn drop(&mut self) {
        let _ = writeln!(self.writer, "BYE").and_then(|_| self.writer.flush());
        if let Some(mut child) = self.child.take() {
            // Closing stdin lets oracles that ignore BYE see end of input.
            self.writer = Box::new(io::sink());
            let start = Instant::now();
            while start.elapsed() < Duration::from_secs(2) {
                if let Ok(Some(_)) = child.try_wait() {
                    return;
                }
                thread::sleep(Duration::from_millis(5));
            }
            let _ = child.kill();
            let _ = child.wait();
        }
    }
}

/// Oracle side of the protocol: answers queries about `machine` until
/// `BYE` or end of input. Each queried word is appended to `log`.
pub fn serve<'l>(
    machine: &Machine,
    input: impl BufRead,
    mut output: impl Write,
    mut log: Option<&mut (dyn Write + 'l)>,
) -> io::Result<()> {
    let alphabet = machine.alphabet();
    writeln!(output, "calf-oracle {PROTOCOL_VERSION} {}", Mode::of(machine))?;
    writeln!(output, "alphabet: {}", alphabet.tokens().join(" "))?;
    output.flush()?;
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line == "BYE" {
            break;
        }
        let reply = match line.strip_prefix("Q ") {
            Some(text) => match alphabet.parse_word(text) {
                Ok(w) => {
                    if let Some(log) = log.as_deref_mut() {
                        writeln!(log, "{}", alphabet.render(&w))?;
                        log.flush()?;
                    }
                    match machine {
                        Machine::Dfa(d) => d.eval(&w).map(|b| b.render_reply()),
                        Machine::Wfa(m) => m.eval(&w).map(|r| r.render_reply()),
                    }
                    .unwrap_or_else(|e| format!("error: {e}"))
                }
                Err(e) => format!("error: {e}"),
            },
            None => format!("error: unknown request `{line}`"),
        };
        writeln!(output, "{reply}")?;
        output.flush()?;
    }
    Ok(())
}

/// Serves connections one at a time; stops after `limit` connections when
/// given.
pub fn serve_tcp<'l>(
    machine: &Machine,
    listener: TcpListener,
    mut log: Option<&mut (dyn Write + 'l)>,
    limit: Option<usize>,
) -> io::Result<()> {
    for (i, stream) in listener.incoming().enumerate() {
        let stream = stream?;
        let reader = BufReader::new(stream.try_clone()?);
        if let Err(e) = serve(machine, reader, &stream, log.as_deref_mut()) {
            eprintln!("connection {}: {e}", i + 1);
        }
        if limit.is_some_and(|n| i + 1 >= n) {
            break;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        assert_eq!("file:d1.dfa".parse(), Ok(Endpoint::File("d1.dfa".into())));
        assert_eq!("exec:./o --x".parse(), Ok(Endpoint::Exec("./o --x".into())));
        assert_eq!("tcp:127.0.0.1:9".parse(), Ok(Endpoint::Tcp("127.0.0.1:9".into())));
        assert!("ftp:x".parse::<Endpoint>().is_err());
        assert!("exec:".parse::<Endpoint>().is_err());
        assert!("d1.dfa".parse::<Endpoint>().is_err());
    }

    #[test]
    fn replies() {
        assert_eq!(bool::parse_reply("1"), Some(true));
        assert_eq!(bool::parse_reply("2"), None);
        assert_eq!(Rational::parse_reply("-3/6").unwrap().to_string(), "-1/2");
        assert_eq!(Rational::parse_reply("x"), None);
    }

    #[test]
    fn serve_transcript() {
        let d1 = calf_core::dfa::fixtures::even_a();
        let input = b"Q eps\nQ a\nQ a b a\nQ c\nBYE\nQ a\n";
        let mut out = Vec::new();
        let mut log = Vec::new();
        serve(&Machine::Dfa(d1), &input[..], &mut out, Some(&mut log)).unwrap();
        let out = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[..5], ["calf-oracle 1 bit", "alphabet: a b", "1", "0", "1"]);
        assert!(lines[5].starts_with("error:"));
        assert_eq!(lines.len(), 6);
        assert_eq!(String::from_utf8(log).unwrap(), "eps\na\na b a\n");
    }
}
