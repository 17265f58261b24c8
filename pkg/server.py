import logging
import os
from typing import Any, Dict

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from dotenv import load_dotenv

from graph.workflow import TOOL_GOALS, execute

load_dotenv()
logger = logging.getLogger(__name__)

app = FastAPI()
app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])

NUMBERS = {"type": "array", "items": {"type": "number"}}
TOLERANCES = {"type": "object", "properties": {k: {"type": "number"} for k in ("eq_tol", "feas_tol", "weight_clamp", "spectrum_tol", "length_tol")}}
SAMPLING = {
    "mode": {"type": "string", "enum": ["topkill", "midpoint", "random", "t-vector"]},
    "seed": {"type": "integer", "minimum": 0},
    "t": NUMBERS,
    "count": {"type": "integer", "minimum": 1},
    "probe": {"type": "string", "enum": ["canonical", "random"]},
}
MATRIX = {"type": "object", "properties": {"M": {"type": "integer"}, "N": {"type": "integer"}, "entries": {"type": "array"}}, "required": ["M", "N", "entries"]}


def _schema(extra: dict, required=("lam", "mu")) -> dict:
    props = {"lam": NUMBERS, "mu": NUMBERS, "tol": TOLERANCES, **extra}
    return {"type": "object", "properties": props, "required": list(required)}


TOOLS_SCHEMA = [
    {"name": "majorization.check", "description": "Does the spectrum lam majorize the lengths mu?",
     "input_schema": _schema({})},
    {"name": "eigensteps.build", "description": "Inner eigenstep table for (lam, mu).",
     "input_schema": _schema(SAMPLING)},
    {"name": "frame.build", "description": "M x N frame with frame-operator spectrum lam and squared norms mu.",
     "input_schema": _schema({**SAMPLING, "dim": {"type": "integer", "minimum": 1}, "table": {"type": "object"}})},
    {"name": "schur_horn.build", "description": "Symmetric matrix with spectrum lam and diagonal mu.",
     "input_schema": _schema({**SAMPLING, "alpha": {"type": "number"}})},
    {"name": "matrix.verify", "description": "Residuals of a frame or Schur-Horn matrix against (lam, mu).",
     "input_schema": _schema({"matrix": MATRIX, "kind": {"type": "string", "enum": ["frame", "schur-horn"]}, "table": {"type": "object"}},
                             required=("lam", "mu", "matrix"))},
]

MANIFEST = {
    "name": "eigensteps-tools",
    "version": "0.1.0",
    "mcp": {
        "protocol": "2025-06-18",
        "transport": {"type": "http-jsonrpc", "endpoint": "/mcp"},
    },
    "tools": [
        {"name": t["name"], "description": t["description"], "input_schema": t["input_schema"]} for t in TOOLS_SCHEMA
    ],
}


def run_tool(name: str, args: Dict[str, Any]) -> Dict[str, Any] | None:
    goal = TOOL_GOALS.get(name)
    if goal is None:
        return None
    if not isinstance(args, dict):
        args = {}
    result = execute(goal, args)
    logger.info("tool %s -> %s", name, result["status"])
    return result


@app.get("/")
def root_ok():
    return {"ok": True}


@app.head("/")
def root_head():
    return Response(status_code=200)


@app.api_route("/.well-known/manifest.json", methods=["GET", "HEAD", "OPTIONS", "POST"])
def manifest():
    return JSONResponse(MANIFEST)


@app.post("/tools/{name}")
async def tool_endpoint(name: str, request: Request):
    try:
        args = await request.json()
    except ValueError:
        return JSONResponse({"ok": False, "error": {"code": "parse", "message": "request body is not JSON"}}, status_code=400)
    out = run_tool(name, args)
    if out is None:
        return JSONResponse({"ok": False, "error": {"code": "unknown_tool", "message": f"Unknown tool {name}"}}, status_code=404)
    return JSONResponse(out)


@app.post("/mcp")
async def mcp_endpoint(request: Request):
    payload = await request.json()

    def handle(obj):
        mid = obj.get("id")
        method = obj.get("method", "")
        params = obj.get("params") or {}
        if method == "tools/list":
            return {"jsonrpc": "2.0", "id": mid, "result": {"tools": [{"name": t["name"], "input_schema": t["input_schema"]} for t in TOOLS_SCHEMA]}}
        if method == "tools/call":
            name = params.get("name")
            try:
                out = run_tool(name, params.get("args") or {})
            except Exception as e:
                logger.exception("tool %s crashed", name)
                return {"jsonrpc": "2.0", "id": mid, "error": {"code": -32000, "message": str(e)}}
            if out is None:
                return {"jsonrpc": "2.0", "id": mid, "error": {"code": -32601, "message": f"Unknown tool {name}"}}
            return {"jsonrpc": "2.0", "id": mid, "result": out}
        return {"jsonrpc": "2.0", "id": mid, "error": {"code": -32601, "message": "Unknown method"}}

    if isinstance(payload, list):
        return JSONResponse([handle(obj) for obj in payload])
    return JSONResponse(handle(payload))


if __name__ == "__main__":
    import uvicorn

    port = int(os.getenv("PORT", "3333"))
    uvicorn.run(app, host=os.getenv("HOST", "0.0.0.0"), port=port)
