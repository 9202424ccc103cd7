"""FastAPI service wrapping the core package.

Run with `uvicorn rotcmc.api:app` (or `rotcmc serve`).  Invalid input maps
to HTTP 400, numerical failures to HTTP 500; both carry the error class and
message in the JSON body.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__, service
from .errors import InvalidInputError, NumericalError

app = FastAPI(
    title="rotcmc",
    version=__version__,
    description="Rotational constant-mean-curvature surfaces in the "
                "3-sphere: rotation angles, closure solvers, profiles, "
                "classification, meshes and sweeps.",
)


@app.exception_handler(InvalidInputError)
async def _invalid_input(request: Request, exc: InvalidInputError):
    return JSONResponse(status_code=400,
                        content={"error": type(exc).__name__,
                                 "detail": str(exc)})


@app.exception_handler(NumericalError)
async def _numerical(request: Request, exc: NumericalError):
    return JSONResponse(status_code=500,
                        content={"error": type(exc).__name__,
                                 "detail": str(exc)})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/k-value", response_model=service.AngleResponse)
def k_value(req: service.KValueRequest):
    return service.k_value(req)


@app.post("/b-value", response_model=service.AngleResponse)
def b_value(req: service.BValueRequest):
    return service.b_value(req)


@app.post("/limits", response_model=service.LimitsResponse)
def limits(req: service.LimitsRequest):
    return service.limits(req)


@app.post("/profile", response_model=service.ProfileResponse)
def profile(req: service.ProfileRequest):
    return service.profile(req)


@app.post("/solve-closure", response_model=service.ClosureResponse)
def solve_closure(req: service.SolveClosureRequest):
    return service.solve_closure(req)


@app.post("/solve-axis", response_model=service.ClosureResponse)
def solve_axis(req: service.SolveAxisRequest):
    return service.solve_axis(req)


@app.post("/classify", response_model=service.ClassificationResponse)
def classify(req: service.ClassifyRequest):
    return service.classify(req)


@app.post("/check-embedded", response_model=service.EmbeddedResponse)
def check_embedded(req: service.CheckEmbeddedRequest):
    return service.check_embedded(req)


@app.post("/mesh", response_model=service.MeshResponse)
def mesh(req: service.MeshRequest):
    return service.build_mesh(req)


@app.post("/sweep", response_model=service.SweepResponse)
def sweep(req: service.SweepRequest):
    return service.run_sweep(req)


@app.post("/verify", response_model=service.VerifyResponse)
def verify(req: service.VerifyRequest):
    return service.verify(req)
