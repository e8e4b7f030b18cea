from django.shortcuts import get_object_or_404
from rest_framework import viewsets
from rest_framework.response import Response

from .models import ColoringRun, EdgeColor, Palette
from .serializers import ColoringRunSerializer, EdgeColorSerializer, PaletteSerializer


class ColoringRunViewSet(viewsets.ModelViewSet):
    """
    ViewSet for coloring runs.
    Posting a layout colors it; runs are not edited afterwards.
    """
    queryset = ColoringRun.objects.all()
    serializer_class = ColoringRunSerializer
    http_method_names = ["get", "post", "delete", "head", "options"]


class NestedEdgeColorViewSet(viewsets.ReadOnlyModelViewSet):
    """
    Read-only nested ViewSet for the edge colors of one run.
    Routes: /api/runs/[run_id]/edges/ and /api/runs/[run_id]/edges/[edge_id]/
    """
    serializer_class = EdgeColorSerializer

    def get_queryset(self):
        return EdgeColor.objects.filter(run_id=self.kwargs.get("run_pk"))

    def retrieve(self, request, pk=None, run_pk=None):
        """Returns 404 if the edge doesn't belong to the run."""
        edge = get_object_or_404(EdgeColor, pk=pk, run_id=run_pk)
        serializer = self.get_serializer(edge)
        return Response(serializer.data)


class PaletteViewSet(viewsets.ModelViewSet):
    """ViewSet for stored palettes, usable as palette:<name>."""
    queryset = Palette.objects.all()
    serializer_class = PaletteSerializer
