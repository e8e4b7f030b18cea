from django.urls import path, include
from rest_framework_nested import routers

from .api_views import ColoringRunViewSet, NestedEdgeColorViewSet, PaletteViewSet
from .views import run_preview

# Create the main router
router = routers.DefaultRouter()
router.register(r'runs', ColoringRunViewSet, basename='run')
router.register(r'palettes', PaletteViewSet, basename='palette')

# Create nested router for run edges
runs_router = routers.NestedDefaultRouter(router, r'runs', lookup='run')
runs_router.register(r'edges', NestedEdgeColorViewSet, basename='run-edges')

urlpatterns = [
    # API routes
    path('api/', include(router.urls)),
    path('api/', include(runs_router.urls)),

    # SVG preview
    path('runs/<int:pk>/preview.svg', run_preview, name='run-preview'),
]
