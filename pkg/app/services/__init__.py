from app.services.root_system_service import RootSystemService
from app.services.series_service import SeriesService
from app.services.c_function_service import CFunctionService
from app.services.jacobi_service import JacobiService
from app.services.hypergeometric_service import HypergeometricService
from app.services.dunkl_service import DunklService
from app.services.matching_service import MatchingService
from app.services.ktype_catalog_service import KTypeCatalogService
from app.services.transform_service import TransformService

__all__ = [
    "RootSystemService",
    "SeriesService",
    "CFunctionService",
    "JacobiService",
    "HypergeometricService",
    "DunklService",
    "MatchingService",
    "KTypeCatalogService",
    "TransformService",
]
