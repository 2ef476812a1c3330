"""
Wire protocol messages (newline-delimited JSON over stdin/stdout).

    engine -> model  {"type":"handshake","T":int,"V":int}
    model  -> engine {"type":"ready","C":int}
    engine -> model  {"type":"predict","id":str,"values":[[f×V]×T]}
    model  -> engine {"type":"probs","id":str,"probs":[f×C]}
    engine -> model  {"type":"shutdown"}
"""
from typing import Annotated, List, Literal, Union

from pydantic import BaseModel, Field, TypeAdapter


class Handshake(BaseModel):
    type: Literal["handshake"] = "handshake"
    T: int
    V: int


class Ready(BaseModel):
    type: Literal["ready"] = "ready"
    C: int


class PredictRequest(BaseModel):
    type: Literal["predict"] = "predict"
    id: str
    values: List[List[float]]


class ProbsResponse(BaseModel):
    type: Literal["probs"] = "probs"
    id: str
    probs: List[float]


class Shutdown(BaseModel):
    type: Literal["shutdown"] = "shutdown"


EngineMessage = TypeAdapter(
    Annotated[Union[Handshake, PredictRequest, Shutdown], Field(discriminator="type")]
)
