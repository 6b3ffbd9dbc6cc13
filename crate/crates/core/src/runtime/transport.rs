//! Batch delivery between workers.
//!
//! In every exchange phase each worker sends exactly one batch (possibly
//! empty) to every worker, itself included, and then collects one batch from
//! every worker. `collect` returns only once all batches have arrived, so a
//! phase never observes partial delivery. Batches from one sender are queued
//! in order, so a fast worker already sending its next phase cannot leak
//! into the current one.

use std::collections::VecDeque;
use std::io::{BufWriter, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Condvar, Mutex};
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use crate::error::RuntimeError;
use crate::graph::{PartitionId, VertexId};
use crate::runtime::codec::{read_batch, write_batch, WireValue};

pub type Batch<V> = Vec<(VertexId, V)>;

pub trait Transport<V>: Sync {
    fn num_workers(&self) -> usize;

    fn send(&self, from: PartitionId, to: PartitionId, batch: Batch<V>)
        -> Result<(), RuntimeError>;

    /// Blocks until a batch from each of the origins `0..expected` is
    /// queued for `to`, then removes the oldest batch of each, ordered by
    /// origin.
    fn collect(
        &self,
        to: PartitionId,
        expected: usize,
    ) -> Result<Vec<(PartitionId, Batch<V>)>, RuntimeError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransportKind {
    #[default]
    InProcess,
    Tcp,
}

struct Mailbox<V> {
    state: Mutex<MailState<V>>,
    ready: Condvar,
}

struct MailState<V> {
    queues: Vec<VecDeque<Batch<V>>>,
    failure: Option<String>,
}

impl<V> Mailbox<V> {
    fn new() -> Self {
        Mailbox {
            state: Mutex::new(MailState {
                queues: Vec::new(),
                failure: None,
            }),
            ready: Condvar::new(),
        }
    }

    fn deliver(&self, origin: PartitionId, batch: Batch<V>) {
        let mut st = self.state.lock().unwrap();
        if st.queues.len() <= origin {
            st.queues.resize_with(origin + 1, VecDeque::new);
        }
        st.queues[origin].push_back(batch);
        drop(st);
        self.ready.notify_all();
    }

    fn fail(&self, msg: String) {
        self.state.lock().unwrap().failure.get_or_insert(msg);
        self.ready.notify_all();
    }

    fn take(
        &self,
        expected: usize,
        timeout: Option<Duration>,
    ) -> Result<Vec<(PartitionId, Batch<V>)>, RuntimeError> {
        let deadline = timeout.map(|t| Instant::now() + t);
        let mut st = self.state.lock().unwrap();
        loop {
            if let Some(msg) = &st.failure {
                return Err(RuntimeError::Transport(msg.clone()));
            }
            let ready = (0..expected)
                .filter(|&o| st.queues.get(o).is_some_and(|q| !q.is_empty()))
                .count();
            if ready == expected {
                break;
            }
            st = match deadline {
                None => self.ready.wait(st).unwrap(),
                Some(d) => {
                    let now = Instant::now();
                    if now >= d {
                        return Err(RuntimeError::Transport(format!(
                            "timed out with {ready} of {expected} batches delivered"
                        )));
                    }
                    self.ready.wait_timeout(st, d - now).unwrap().0
                }
            };
        }
        Ok((0..expected)
            .map(|o| (o, st.queues[o].pop_front().expect("checked ready")))
            .collect())
    }
}

/// Shared-memory mailboxes; the default transport.
pub struct InProcessTransport<V> {
    boxes: Vec<Mailbox<V>>,
}

impl<V> InProcessTransport<V> {
    pub fn new(n: usize) -> Self {
        InProcessTransport {
            boxes: (0..n).map(|_| Mailbox::new()).collect(),
        }
    }
}

impl<V: Send> Transport<V> for InProcessTransport<V> {
    fn num_workers(&self) -> usize {
        self.boxes.len()
    }

    fn send(
        &self,
        from: PartitionId,
        to: PartitionId,
        batch: Batch<V>,
    ) -> Result<(), RuntimeError> {
        self.boxes[to].deliver(from, batch);
        Ok(())
    }

    fn collect(
        &self,
        to: PartitionId,
        expected: usize,
    ) -> Result<Vec<(PartitionId, Batch<V>)>, RuntimeError> {
        self.boxes[to].take(expected, None)
    }
}

/// Loopback TCP transport: one listener per worker, one connection per
/// ordered worker pair, batches framed by [`crate::runtime::codec`].
pub struct TcpTransport<V> {
    boxes: Arc<Vec<Mailbox<V>>>,
    addrs: Vec<SocketAddr>,
    conns: Vec<Mutex<Option<BufWriter<TcpStream>>>>,
    shutdown: Arc<AtomicBool>,
    threads: Arc<Mutex<Vec<JoinHandle<()>>>>,
    timeout: Duration,
}

impl<V: WireValue + Send + 'static> TcpTransport<V> {
    pub fn new(n: usize) -> Result<Self, RuntimeError> {
        Self::with_timeout(n, Duration::from_secs(120))
    }

    pub fn with_timeout(n: usize, timeout: Duration) -> Result<Self, RuntimeError> {
        let io_err = |e: std::io::Error| RuntimeError::Transport(e.to_string());
        let boxes: Arc<Vec<Mailbox<V>>> = Arc::new((0..n).map(|_| Mailbox::new()).collect());
        let shutdown = Arc::new(AtomicBool::new(false));
        let threads: Arc<Mutex<Vec<JoinHandle<()>>>> = Arc::new(Mutex::new(Vec::new()));
        let mut addrs = Vec::with_capacity(n);
        for to in 0..n {
            let listener = TcpListener::bind("127.0.0.1:0").map_err(io_err)?;
            addrs.push(listener.local_addr().map_err(io_err)?);
            let (boxes, shutdown, registry) = (boxes.clone(), shutdown.clone(), threads.clone());
            let acceptor = std::thread::spawn(move || {
                for stream in listener.incoming() {
                    if shutdown.load(Ordering::SeqCst) {
                        break;
                    }
                    let Ok(stream) = stream else { continue };
                    let boxes = boxes.clone();
                    let shutdown = shutdown.clone();
                    let reader = std::thread::spawn(move || {
                        let mut r = std::io::BufReader::new(stream);
                        loop {
                            match read_batch::<V, _>(&mut r) {
                                Ok(Some((origin, pairs))) => boxes[to].deliver(origin, pairs),
                                Ok(None) => break,
                                Err(e) => {
                                    if !shutdown.load(Ordering::SeqCst) {
                                        boxes[to]
                                            .fail(format!("connection to worker {to} lost: {e}"));
                                    }
                                    break;
                                }
                            }
                        }
                    });
                    registry.lock().unwrap().push(reader);
                }
            });
            threads.lock().unwrap().push(acceptor);
        }
        Ok(TcpTransport {
            boxes,
            addrs,
            conns: (0..n * n).map(|_| Mutex::new(None)).collect(),
            shutdown,
            threads,
            timeout,
        })
    }
}

impl<V: WireValue + Send + 'static> Transport<V> for TcpTransport<V> {
    fn num_workers(&self) -> usize {
        self.addrs.len()
    }

    fn send(
        &self,
        from: PartitionId,
        to: PartitionId,
        batch: Batch<V>,
    ) -> Result<(), RuntimeError> {
        let n = self.addrs.len();
        let mut slot = self.conns[from * n + to].lock().unwrap();
        if slot.is_none() {
            let stream = TcpStream::connect(self.addrs[to])
                .map_err(|e| RuntimeError::Transport(format!("connect {from}->{to}: {e}")))?;
            stream.set_nodelay(true).ok();
            *slot = Some(BufWriter::new(stream));
        }
        let w = slot.as_mut().expect("connected above");
        write_batch(w, from, &batch)
            .and_then(|_| w.flush())
            .map_err(|e| RuntimeError::Transport(format!("send {from}->{to}: {e}")))
    }

    fn collect(
        &self,
        to: PartitionId,
        expected: usize,
    ) -> Result<Vec<(PartitionId, Batch<V>)>, RuntimeError> {
        self.boxes[to].take(expected, Some(self.timeout))
    }
}

impl<V> Drop for TcpTransport<V> {
    fn drop(&mut self) {
        self.shutdown.store(true, Ordering::SeqCst);
        for c in &self.conns {
            if let Some(w) = c.lock().unwrap().take() {
                if let Ok(s) = w.into_inner() {
                    let _ = s.shutdown(std::net::Shutdown::Both);
                }
            }
        }
        // Wake the acceptors so they observe the shutdown flag.
        for addr in &self.addrs {
            let _ = TcpStream::connect(addr);
        }
        let handles = std::mem::take(&mut *self.threads.lock().unwrap());
        for h in handles {
            let _ = h.join();
        }
        // Readers spawned while joining the acceptors.
        let handles = std::mem::take(&mut *self.threads.lock().unwrap());
        for h in handles {
            let _ = h.join();
        }
    }
}
