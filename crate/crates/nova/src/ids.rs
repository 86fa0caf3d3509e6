use std::collections::HashSet;
use std::sync::{Mutex, OnceLock};

use nova_core::{WidgetId, WidgetIdError};
use rand::RngCore;

fn issued() -> &'static Mutex<HashSet<WidgetId>> {
    static ISSUED: OnceLock<Mutex<HashSet<WidgetId>>> = OnceLock::new();
    ISSUED.get_or_init(Default::default)
}

/// Returns `explicit` if given (after checking its format), otherwise a
/// random id that this process has not handed out before.
pub fn new_widget_id(explicit: Option<&str>, rng: &mut impl RngCore) -> Result<WidgetId, WidgetIdError> {
    let mut seen = issued().lock().unwrap_or_else(|poisoned| poisoned.into_inner());
    if let Some(text) = explicit {
        let id = WidgetId::parse(text)?;
        seen.insert(id);
        return Ok(id);
    }
    loop {
        let id = WidgetId::from_bits(rng.next_u32());
        if seen.insert(id) {
            return Ok(id);
        }
    }
}

/// [`new_widget_id`] drawing from the thread-local generator.
pub fn fresh_widget_id() -> WidgetId {
    new_widget_id(None, &mut rand::thread_rng()).expect("no explicit id to validate")
}
