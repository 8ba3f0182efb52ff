# Interface Layer - External interfaces (API, CLI)
