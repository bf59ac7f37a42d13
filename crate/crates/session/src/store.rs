use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use uuid::Uuid;

use evc_core::game::Budget;

use crate::session::{CreateRequest, RoundResult, Session, SessionError, SessionView};

struct Entry {
    session: Mutex<Session>,
    snapshot: RwLock<Arc<SessionView>>,
}

/// All live and closed sessions, with one append-only trace file per session
/// in `dir`. Mutations of one session are serialized; reads return the last
/// published snapshot.
pub struct Store {
    dir: PathBuf,
    budget: Budget,
    sessions: RwLock<HashMap<String, Arc<Entry>>>,
}

impl Store {
    pub fn new(dir: impl Into<PathBuf>, budget: Budget) -> std::io::Result<Store> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Store {
            dir,
            budget,
            sessions: RwLock::new(HashMap::new()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn trace_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.trace"))
    }

    fn entry(&self, id: &str) -> Result<Arc<Entry>, SessionError> {
        self.sessions
            .read()
            .get(id)
            .cloned()
            .ok_or_else(|| SessionError::UnknownSession(id.to_string()))
    }

    fn io(e: std::io::Error) -> SessionError {
        SessionError::Internal(format!("trace file: {e}"))
    }

    pub fn create(&self, req: &CreateRequest) -> Result<SessionView, SessionError> {
        let id = Uuid::new_v4().simple().to_string();
        let session = Session::create(id.clone(), req, &self.budget)?;
        fs::write(self.trace_path(&id), session.trace_header()).map_err(Self::io)?;
        let view = session.view();
        let entry = Arc::new(Entry {
            session: Mutex::new(session),
            snapshot: RwLock::new(Arc::new(view.clone())),
        });
        self.sessions.write().insert(id, entry);
        Ok(view)
    }

    pub fn view(&self, id: &str) -> Result<Arc<SessionView>, SessionError> {
        Ok(self.entry(id)?.snapshot.read().clone())
    }

    pub fn trace(&self, id: &str) -> Result<String, SessionError> {
        let entry = self.entry(id)?;
        let text = entry.session.lock().trace_text();
        Ok(text)
    }

    fn mutate(
        &self,
        id: &str,
        f: impl FnOnce(&mut Session) -> Result<RoundResult, SessionError>,
    ) -> Result<RoundResult, SessionError> {
        let entry = self.entry(id)?;
        let mut session = entry.session.lock();
        let before = session.records().len();
        let result = f(&mut session)?;
        if session.records().len() > before {
            let mut file = OpenOptions::new()
                .append(true)
                .open(self.trace_path(id))
                .map_err(Self::io)?;
            for rec in &session.records()[before..] {
                writeln!(file, "{}", rec.format(session.graph())).map_err(Self::io)?;
            }
        }
        *entry.snapshot.write() = Arc::new(session.view());
        Ok(result)
    }

    pub fn attack(&self, id: &str, u: &str, v: &str) -> Result<RoundResult, SessionError> {
        self.mutate(id, |s| s.attack(u, v))
    }

    pub fn defend(&self, id: &str, moves: &[(String, String)]) -> Result<RoundResult, SessionError> {
        self.mutate(id, |s| s.defend(moves))
    }

    pub fn close(&self, id: &str) -> Result<Arc<SessionView>, SessionError> {
        let entry = self.entry(id)?;
        let mut session = entry.session.lock();
        session.close()?;
        let view = Arc::new(session.view());
        *entry.snapshot.write() = view.clone();
        Ok(view)
    }
}
