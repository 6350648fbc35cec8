"""
Characteristic Class Service
HTTP front end for Segre, Fulton, CSM and Milnor classes, projective degrees,
Euler characteristics and excess counts of projective schemes
"""
import asyncio
import logging
from typing import List, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, ValidationError
import uvicorn

from cli import COMMANDS, Request, describe_error, execute, result_key
from config import Config
from services.errors import (
    AlgebraError,
    InvalidField,
    ParseError,
    UnknownVariable,
    UnsupportedField,
)
from services.renderer import to_payload

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# Initialize FastAPI app
app = FastAPI(
    title="Characteristic Class Service",
    description="Segre, Chern-Fulton and Chern-Schwartz-MacPherson classes of projective schemes",
    version="1.0.0"
)

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Pydantic models
class ComputeRequest(BaseModel):
    generators: str
    vars: Optional[List[str]] = None
    field: str = "q"
    seed: Optional[int] = None
    force: bool = False
    simplify: bool = False
    method: str = "limit"
    d: Optional[int] = None
    n: Optional[int] = None


def status_for(error: Exception) -> int:
    if isinstance(error, (ParseError, UnknownVariable, InvalidField, ValidationError)):
        return 400
    if isinstance(error, UnsupportedField):
        return 422
    return 500


@app.get("/api/health")
async def health_check():
    """Liveness and the active pipeline settings"""
    return {
        "status": "healthy",
        "commands": list(COMMANDS),
        "seed": Config.SEED,
        "groebner_engine": Config.GROEBNER_ENGINE,
        "saturation": Config.SATURATION,
        "degrees_method": Config.DEGREES_METHOD,
    }


@app.post("/api/{command}")
async def compute(command: str, body: ComputeRequest):
    """Run one pipeline command on the posted ideal"""
    if command not in COMMANDS:
        raise HTTPException(status_code=404, detail=f"Unknown command: {command}")

    fields = body.model_dump(exclude_none=True)
    try:
        request = Request(command=command, format="json", **fields)
        # Groebner work is CPU bound; keep the event loop free
        result = await asyncio.to_thread(execute, request)
    except (AlgebraError, ValidationError) as e:
        status = status_for(e)
        if status == 500:
            logger.error(f"{command} failed: {e}")
        else:
            logger.warning(f"{command} rejected: {e}")
        raise HTTPException(status_code=status, detail=describe_error(e))

    logger.info(f"{command} of {body.generators!r} done")
    return {"command": command, "result": to_payload(result, result_key(command))}


if __name__ == "__main__":
    uvicorn.run(
        "app:app",
        host=Config.HOST,
        port=Config.PORT,
        reload=False,
        log_level="info"
    )
