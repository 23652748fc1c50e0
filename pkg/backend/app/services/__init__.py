# Service modules are imported directly (app.services.<name>_service); the
# radio model is loaded by the schema layer, so this package stays import-free.
