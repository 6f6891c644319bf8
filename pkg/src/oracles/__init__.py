"""Reference implementations the engines are checked against. Nothing here imports src.engine."""
