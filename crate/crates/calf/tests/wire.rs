use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::thread;
use std::time::Duration;

use calf::format::{serialize_dfa, Machine};
use calf::wire::{serve_tcp, Endpoint, Session};
use calf_core::dfa::fixtures::{ab, even_a};
use calf_core::weighted::wfa::fixtures::count_a;
use calf_core::weighted::{rat, Rational};
use calf_core::{Alphabet, MembershipOracle, OracleError, QueryCache, Word};

const CALF: &str = env!("CARGO_BIN_EXE_calf");
const TIMEOUT: Duration = Duration::from_secs(10);

/// A TCP oracle that sends `script` lines after connecting and answers
/// every query with `reply` (or stays silent when `None`).
fn scripted(script: &'static [&'static str], reply: Option<&'static str>) -> Endpoint {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    thread::spawn(move || {
        let (stream, _) = listener.accept().unwrap();
        let mut out = stream.try_clone().unwrap();
        for l in script {
            writeln!(out, "{l}").unwrap();
        }
        for line in BufReader::new(stream).lines() {
            let Ok(line) = line else { break };
            if line == "BYE" {
                break;
            }
            match reply {
                Some(r) => writeln!(out, "{r}").unwrap(),
                None => thread::sleep(Duration::from_secs(3)),
            }
        }
    });
    Endpoint::Tcp(addr.to_string())
}

fn tcp_oracle(machine: Machine) -> Endpoint {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    thread::spawn(move || serve_tcp(&machine, listener, None, Some(1)).unwrap());
    Endpoint::Tcp(addr.to_string())
}

fn setup_error<T: calf::wire::Reply>(r: Result<Session<T>, OracleError>) -> String {
    match r {
        Err(OracleError::Setup(m)) => m,
        Err(e) => panic!("expected a setup error, got {e}"),
        Ok(_) => panic!("expected a setup error"),
    }
}

#[test]
fn tcp_session_answers_and_caches() {
    let ep = tcp_oracle(Machine::Dfa(even_a()));
    let session = Session::<bool>::connect(&ep, Some(&ab()), TIMEOUT).unwrap();
    let mut mq = QueryCache::new(session);
    assert!(mq.query(&Word::from([0, 1, 0])).unwrap());
    assert!(mq.query(&Word::from([0, 1, 0])).unwrap());
    assert!(!mq.query(&Word::from([0])).unwrap());
    assert_eq!(mq.log().cache_hits, 1);
    assert_eq!(mq.inner().sent(), mq.log().wire_queries());
}

#[test]
fn rational_session() {
    let ep = tcp_oracle(Machine::Wfa(count_a()));
    let mut s = Session::<Rational>::connect(&ep, None, TIMEOUT).unwrap();
    assert_eq!(s.alphabet(), &ab());
    assert_eq!(s.query(&Word::from([0, 1, 0])).unwrap(), rat(2));
}

#[test]
fn alphabet_is_compared_as_a_set() {
    let ep = scripted(&["calf-oracle 1 bit", "alphabet: b a"], Some("1"));
    let mut s = Session::<bool>::connect(&ep, Some(&ab()), TIMEOUT).unwrap();
    assert_eq!(s.alphabet(), &ab());
    assert!(s.query(&Word::from([0])).unwrap());
}

#[test]
fn alphabet_mismatch() {
    let ep = scripted(&["calf-oracle 1 bit", "alphabet: a b c"], Some("1"));
    let m = setup_error(Session::<bool>::connect(&ep, Some(&ab()), TIMEOUT));
    assert!(m.contains("does not match"), "{m}");
}

#[test]
fn banner_mismatch() {
    let ep = scripted(&["calf-oracle 1 rational", "alphabet: a b"], Some("1"));
    let m = setup_error(Session::<bool>::connect(&ep, None, TIMEOUT));
    assert!(m.contains("rational"), "{m}");

    let ep = scripted(&["calf-oracle 2 bit", "alphabet: a b"], Some("1"));
    let m = setup_error(Session::<bool>::connect(&ep, None, TIMEOUT));
    assert!(m.contains("version 2"), "{m}");

    let ep = scripted(&["hello"], Some("1"));
    let m = setup_error(Session::<bool>::connect(&ep, None, TIMEOUT));
    assert!(m.contains("hello"), "{m}");
}

#[test]
fn malformed_reply_names_the_line() {
    let ep = scripted(&["calf-oracle 1 bit", "alphabet: a b"], Some("2"));
    let mut s = Session::<bool>::connect(&ep, None, TIMEOUT).unwrap();
    match s.query(&Word::from([0, 1])) {
        Err(OracleError::Transport(m)) => {
            assert!(m.contains("`2`") && m.contains("Q a b"), "{m}")
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn timeout_is_an_error() {
    let ep = scripted(&["calf-oracle 1 bit", "alphabet: a b"], None);
    let mut s = Session::<bool>::connect(&ep, None, Duration::from_millis(200)).unwrap();
    match s.query(&Word::empty()) {
        Err(OracleError::Transport(m)) => assert!(m.contains("within") && m.contains("Q eps"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn disconnect_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("oracle.sh");
    std::fs::write(&script, "#!/bin/sh\necho 'calf-oracle 1 bit'\necho 'alphabet: a b'\nread q\necho 1\n").unwrap();
    let ep = Endpoint::Exec(format!("sh {}", script.display()));
    let mut s = Session::<bool>::connect(&ep, None, TIMEOUT).unwrap();
    assert!(s.query(&Word::empty()).unwrap());
    match s.query(&Word::from([1])) {
        Err(OracleError::Transport(m)) => assert!(m.contains("Q b") && m.contains("exit status: 0"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn process_exiting_before_banner_reports_status() {
    let ep = Endpoint::Exec("false".into());
    let m = setup_error(Session::<bool>::connect(&ep, None, TIMEOUT));
    assert!(m.contains("exit status: 1"), "{m}");

    let ep = Endpoint::Exec("/nonexistent/oracle".into());
    let m = setup_error(Session::<bool>::connect(&ep, None, TIMEOUT));
    assert!(m.contains("cannot start"), "{m}");
}

#[test]
fn process_oracle_and_bye() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("d1.dfa");
    let log = dir.path().join("q.log");
    std::fs::write(&file, serialize_dfa(&even_a())).unwrap();
    let ep = Endpoint::Exec(format!("{CALF} serve --in {} --log {}", file.display(), log.display()));
    let mut s = Session::<bool>::connect(&ep, Some(&Alphabet::from_chars("ab").unwrap()), TIMEOUT).unwrap();
    for w in [&[][..], &[0], &[0, 0], &[1, 0, 1, 0]] {
        assert_eq!(s.query(&Word::from(w)).unwrap(), even_a().eval(w).unwrap());
    }
    assert_eq!(s.sent(), 4);
    drop(s);
    assert_eq!(std::fs::read_to_string(&log).unwrap(), "eps\na\na a\nb a b a\n");
}
