"""LangGraph orchestration of the KV verification chain."""
